"""Block-wise audio recovery from a random quarter of the samples.

Each length-N block is modelled as sparse in the orthonormal DCT and
recovered from its retained samples with weighted l1. The weights favour
low-frequency bins and the strongest bins of the previously recovered
block, either as one set (two-set scheme) or split with the previous-block
bins at half the weight (three-set scheme).
"""
from __future__ import annotations

import math
import wave

import numpy as np

from ..core import RestrictedDctSynthesis, as_real_vector, dct_inverse, make_rng
from ..solver import WeightedBPDNProblem, solve_weighted_bpdn
from ..support import SupportSet, WeightAssignment, assemble_weights, best_k_support
from .config import AudioConfig
from .signals import snr
from .tables import ResultTable

__all__ = [
    "lowfreq_bins",
    "draw_kept_samples",
    "recover_blocks",
    "run_audio_experiment",
    "load_audio",
    "save_raw_f64",
    "SCHEMES",
]

SCHEMES = ("two-set", "three-set")


def lowfreq_bins(N, fs, cutoff):
    """DCT bins whose frequency j * fs / (2N) does not exceed ``cutoff``."""
    if not cutoff < fs / 2:
        raise ValueError("cutoff must be below the Nyquist frequency")
    freqs = np.arange(N) * fs / (2.0 * N)
    return SupportSet(tuple(np.flatnonzero(freqs <= cutoff)), N)


def draw_kept_samples(cfg):
    """One uniform draw without replacement over the whole truncated signal,
    split into per-block offsets."""
    total = cfg.blocks * cfg.N
    count = int(math.floor(cfg.keep * total))
    kept = np.sort(make_rng(cfg.seed).choice(total, size=count, replace=False))
    per_block = []
    for j in range(cfg.blocks):
        lo = j * cfg.N
        sel = kept[(kept >= lo) & (kept < lo + cfg.N)] - lo
        if sel.size == 0:
            raise ValueError(f"block {j} keeps no samples")
        per_block.append(sel)
    return per_block


def _weights(scheme, omega, T1, T2, N):
    if scheme == "two-set":
        parts = ((T1 | T2, omega),)
    elif scheme == "three-set":
        parts = ((T1, omega / 2.0), (T2 - T1, omega))
    else:
        raise ValueError(f"unknown scheme {scheme!r}")
    return assemble_weights(WeightAssignment(parts, N))


def recover_blocks(cfg, samples, omega, scheme, kept=None):
    """Run one scheme at one weight over every block.

    Returns ``(coefs, statuses)``: the recovered DCT coefficients of each
    block (a ``blocks x N`` array) and the solver status per block.
    """
    x = _truncate(cfg, samples)
    kept = draw_kept_samples(cfg) if kept is None else kept
    N = cfg.N
    T2 = lowfreq_bins(N, cfg.fs, cfg.cutoff)
    coefs = np.zeros((cfg.blocks, N))
    statuses = []
    prev = None
    for j in range(cfg.blocks):
        idx = kept[j]
        op = RestrictedDctSynthesis(idx, N)
        y = x[j * N + idx]
        if prev is None:
            T1 = SupportSet((), N)
        else:
            T1 = best_k_support(prev, idx.size // cfg.divisor)
        w = _weights(scheme, omega, T1, T2, N)
        eps = cfg.epsilon_rel * float(np.linalg.norm(y))
        res = solve_weighted_bpdn(WeightedBPDNProblem(op, y, eps, w))
        coefs[j] = res.x
        statuses.append(res.status)
        prev = res.x
    return coefs, statuses


def _truncate(cfg, samples):
    samples = as_real_vector(samples, "samples")
    total = cfg.blocks * cfg.N
    if samples.size < total:
        raise ValueError(f"need at least {total} samples, got {samples.size}")
    return samples[:total]


def run_audio_experiment(cfg, samples):
    """Overall time-domain SNR per weight for both schemes, one row per weight."""
    if not isinstance(cfg, AudioConfig):
        raise TypeError("cfg must be an AudioConfig")
    x = _truncate(cfg, samples)
    kept = draw_kept_samples(cfg)
    rows = []
    for omega in cfg.omega_grid:
        row = [omega]
        bad = 0
        for scheme in SCHEMES:
            coefs, statuses = recover_blocks(cfg, x, omega, scheme, kept)
            rec = np.concatenate([dct_inverse(c) for c in coefs])
            row.append(snr(x, rec))
            bad += sum(s != "converged" for s in statuses)
        row.append(bad)
        rows.append(row)
    return ResultTable(("omega", "snr_two", "snr_three", "unconverged"), rows)


def load_audio(path, fmt="wav16-mono", rate=None):
    """Read samples and their rate.

    ``wav16-mono``: 16-bit PCM mono RIFF, scaled by 1/32768 into [-1, 1).
    ``raw-f64``: little-endian float64 stream; ``rate`` must be given.
    """
    if fmt == "wav16-mono":
        try:
            with wave.open(str(path), "rb") as fh:
                if fh.getnchannels() != 1:
                    raise ValueError(f"expected mono audio, got {fh.getnchannels()} channels")
                if fh.getsampwidth() != 2:
                    raise ValueError(f"expected 16-bit samples, got {8 * fh.getsampwidth()}-bit")
                sr = float(fh.getframerate())
                frames = fh.readframes(fh.getnframes())
        except (wave.Error, EOFError) as exc:
            raise ValueError(f"malformed WAV file {path}: {exc}") from exc
        data = np.frombuffer(frames, dtype="<i2").astype(np.float64) / 32768.0
        return data, sr
    if fmt == "raw-f64":
        if rate is None or not rate > 0:
            raise ValueError("raw-f64 input needs a positive sample rate")
        raw = np.fromfile(str(path), dtype="<f8")
        return raw.astype(np.float64), float(rate)
    raise ValueError(f"unknown audio format {fmt!r}")


def save_raw_f64(path, samples):
    np.asarray(samples, dtype="<f8").tofile(str(path))
