"""Test signals and the SNR metric."""
from __future__ import annotations

import math

import numpy as np

from ..core import as_real_vector, make_rng

__all__ = ["snr", "gen_sparse_signal", "speech_like_signal"]


def snr(x, xr):
    """10 log10(||x||^2 / ||x - xr||^2) in dB; ``inf`` when xr == x exactly."""
    x = as_real_vector(x, "x")
    xr = as_real_vector(xr, "xr")
    if x.shape != xr.shape:
        raise ValueError(f"length mismatch: {x.size} vs {xr.size}")
    sig = float(x @ x)
    if sig == 0.0:
        raise ValueError("SNR undefined for a zero reference signal")
    d = x - xr
    err = float(d @ d)
    if err == 0.0:
        return math.inf
    return 10.0 * math.log10(sig / err)


def gen_sparse_signal(N, k, model="gaussian", seed=0, c=1.0, p=1.3):
    """Draw a test vector.

    ``gaussian``: k standard-normal entries on a uniformly random support.
    ``power-law``: magnitudes c * j**-p for j = 1..N, random signs, positions
    shuffled; ``k`` is then only validated.
    """
    if N < 1 or k < 0 or k > N:
        raise ValueError(f"need 0 <= k <= N with N >= 1, got N={N}, k={k}")
    rng = make_rng(seed)
    if model == "gaussian":
        x = np.zeros(N)
        support = rng.choice(N, size=k, replace=False)
        x[support] = rng.standard_normal(k)
        return x
    if model == "power-law":
        if not p > 1.0:
            raise ValueError(f"power-law exponent must exceed 1, got {p}")
        mags = c * np.arange(1, N + 1, dtype=np.float64) ** (-p)
        signs = rng.choice(np.array([-1.0, 1.0]), size=N)
        x = np.empty(N)
        x[rng.permutation(N)] = mags * signs
        return x
    raise ValueError(f"unknown signal model {model!r}")


def speech_like_signal(length, fs=44100.0, seed=7):
    """Deterministic voiced-speech stand-in.

    A glottal-like harmonic series on a slowly gliding pitch, shaped by a
    few formant bumps and a syllable-rate envelope, plus faint white noise.
    Most energy sits below 4 kHz but a thin band of harmonics reaches past it.
    """
    if length < 1:
        raise ValueError("length must be positive")
    rng = make_rng(seed)
    t = np.arange(length) / fs
    f0 = 140.0 + 25.0 * np.sin(2 * np.pi * 0.7 * t + 0.3) + 8.0 * np.sin(2 * np.pi * 2.3 * t)
    phase = 2 * np.pi * np.cumsum(f0) / fs
    formants = np.array([500.0, 1500.0, 2500.0, 4500.0])
    widths = np.array([250.0, 350.0, 450.0, 600.0])
    gains = np.array([1.0, 0.5, 0.25, 0.1])
    out = np.zeros(length)
    fmean = 140.0
    for h in range(1, int(7000 // fmean) + 1):
        fh = h * fmean
        env = np.sum(gains * np.exp(-0.5 * ((fh - formants) / widths) ** 2))
        amp = (1.0 / h ** 0.6) * (0.15 + env)
        out += amp * np.sin(h * phase + rng.uniform(0, 2 * np.pi))
    out *= 0.55 + 0.45 * np.sin(2 * np.pi * 3.1 * t) ** 2
    out += 1e-3 * rng.standard_normal(length)
    return out / np.max(np.abs(out))
