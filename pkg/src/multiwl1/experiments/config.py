"""Experiment configurations and their JSON form."""
from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass

__all__ = ["SyntheticConfig", "AudioConfig", "config_from_dict", "load_config"]


def _grid(values, name, lo=None, hi=None):
    vals = tuple(float(v) for v in values)
    if not vals:
        raise ValueError(f"{name} grid is empty")
    for v in vals:
        if (lo is not None and v < lo) or (hi is not None and v > hi):
            raise ValueError(f"{name} grid value {v} outside [{lo}, {hi}]")
    return vals


def _check_seed(seed):
    if not 0 <= int(seed) < 2**64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")


@dataclass(frozen=True)
class SyntheticConfig:
    N: int = 500
    n: int = 100
    k: int = 35
    trials: int = 100
    size: int = 40
    alpha_grid: tuple = (0.3, 0.5, 0.7)
    omega_grid: tuple = (0.1, 0.3, 0.5)
    size1: int = 20
    alpha1: float = 0.8
    omega1: float = 0.01
    epsilon: float = 0.0
    noise: bool = False
    seed: int = 0
    signal_model: str = "gaussian"
    power_c: float = 1.0
    power_p: float = 1.3

    def __post_init__(self):
        object.__setattr__(self, "alpha_grid", _grid(self.alpha_grid, "alpha", 0.0, 1.0))
        object.__setattr__(self, "omega_grid", _grid(self.omega_grid, "omega", 0.0, 1.0))
        if not 0 < self.k < self.n < self.N:
            raise ValueError(f"need 0 < k < n < N, got k={self.k}, n={self.n}, N={self.N}")
        if self.trials < 1:
            raise ValueError("trials must be positive")
        if not 1 <= self.size <= self.N:
            raise ValueError(f"estimate size must lie in [1, N], got {self.size}")
        if not 1 <= self.size1 <= self.size:
            raise ValueError(f"size1 must lie in [1, size], got {self.size1}")
        if not 0.0 <= self.alpha1 <= 1.0 or not 0.0 <= self.omega1 <= 1.0:
            raise ValueError("alpha1 and omega1 must lie in [0, 1]")
        if not self.epsilon >= 0.0:
            raise ValueError("epsilon must be nonnegative")
        if self.signal_model not in ("gaussian", "power-law"):
            raise ValueError(f"unknown signal model {self.signal_model!r}")
        if self.signal_model == "power-law" and not self.power_p > 1.0:
            raise ValueError("power-law exponent must exceed 1")
        _check_seed(self.seed)


@dataclass(frozen=True)
class AudioConfig:
    N: int = 2048
    keep: float = 0.25
    blocks: int = 21
    cutoff: float = 4000.0
    fs: float = 44100.0
    divisor: int = 16
    omega_grid: tuple = tuple(i / 6 for i in range(7))
    epsilon_rel: float = 1e-6
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "omega_grid", _grid(self.omega_grid, "omega", 0.0, 1.0))
        if self.N < 1 or self.blocks < 1 or self.divisor < 1:
            raise ValueError("N, blocks and divisor must be positive")
        if not 0.0 < self.keep <= 1.0:
            raise ValueError(f"keep fraction must lie in (0, 1], got {self.keep}")
        if not 0.0 < self.cutoff < self.fs / 2:
            raise ValueError("cutoff must lie strictly between 0 and fs/2")
        if not self.epsilon_rel >= 0.0:
            raise ValueError("epsilon_rel must be nonnegative")
        _check_seed(self.seed)


def config_from_dict(cls, data, **overrides):
    """Build ``cls`` from a mapping, rejecting unknown keys; ``None`` overrides are ignored."""
    names = {f.name for f in dataclasses.fields(cls)}
    merged = dict(data)
    merged.update({k: v for k, v in overrides.items() if v is not None})
    unknown = sorted(set(merged) - names)
    if unknown:
        raise ValueError(f"unknown {cls.__name__} fields: {', '.join(unknown)}")
    return cls(**merged)


def load_config(cls, path, **overrides):
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError("config must be a JSON object")
    return config_from_dict(cls, data, **overrides)
