"""Support sets, support-estimate statistics and weight assembly."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import as_real_vector, make_rng

__all__ = [
    "SupportSet",
    "WeightAssignment",
    "best_k_support",
    "estimate_metrics",
    "synth_support_estimate",
    "split_estimate",
    "assemble_weights",
    "round_half_up",
]


def round_half_up(value):
    # the 1e-9 guard absorbs products like 0.7 * 40 = 28.000000000000004
    # landing just under a half
    return int(math.floor(value + 0.5 + 1e-9))


@dataclass(frozen=True)
class SupportSet:
    """Sorted, duplicate-free indices inside ``range(N)``."""

    indices: tuple
    N: int

    def __post_init__(self):
        N = int(self.N)
        if N < 1:
            raise ValueError("ambient dimension must be positive")
        idx = np.asarray(list(self.indices), dtype=np.int64).ravel()
        if idx.size and (idx.min() < 0 or idx.max() >= N):
            raise ValueError(f"support indices must lie in [0, {N - 1}]")
        uniq = np.unique(idx)
        if uniq.size != idx.size:
            raise ValueError("support indices contain duplicates")
        object.__setattr__(self, "indices", tuple(int(i) for i in uniq))
        object.__setattr__(self, "N", N)

    @classmethod
    def from_mask(cls, mask):
        mask = np.asarray(mask, dtype=bool)
        return cls(tuple(np.flatnonzero(mask)), mask.size)

    def __len__(self):
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __contains__(self, i):
        return int(i) in set(self.indices)

    def as_array(self):
        return np.asarray(self.indices, dtype=np.int64)

    def mask(self):
        m = np.zeros(self.N, dtype=bool)
        m[self.as_array()] = True
        return m

    def _check(self, other):
        if self.N != other.N:
            raise ValueError(f"ambient dimensions differ: {self.N} vs {other.N}")

    def __and__(self, other):
        self._check(other)
        return SupportSet.from_mask(self.mask() & other.mask())

    def __or__(self, other):
        self._check(other)
        return SupportSet.from_mask(self.mask() | other.mask())

    def __sub__(self, other):
        self._check(other)
        return SupportSet.from_mask(self.mask() & ~other.mask())

    def complement(self):
        return SupportSet.from_mask(~self.mask())

    def to_text(self):
        return ",".join(str(i) for i in self.indices)

    @classmethod
    def from_text(cls, text, N):
        text = text.strip()
        return cls(tuple(int(t) for t in text.split(",")) if text else (), N)


@dataclass(frozen=True)
class WeightAssignment:
    """Pairwise-disjoint sets with one weight each; weight 1 elsewhere."""

    parts: tuple
    N: int

    def __post_init__(self):
        parts = tuple((s, float(om)) for s, om in self.parts)
        seen = np.zeros(int(self.N), dtype=bool)
        for s, om in parts:
            if s.N != self.N:
                raise ValueError(f"set ambient dimension {s.N} differs from {self.N}")
            if not 0.0 <= om <= 1.0:
                raise ValueError(f"weight must lie in [0, 1], got {om}")
            idx = s.as_array()
            hit = idx[seen[idx]]
            if hit.size:
                raise ValueError(f"weighted sets overlap at index {int(hit.min())}")
            seen[idx] = True
        object.__setattr__(self, "parts", parts)


def best_k_support(x, k):
    """Indices of the k largest |x_i|; equal magnitudes go to the lower index."""
    x = as_real_vector(x, "x")
    if k < 0 or k > x.size:
        raise ValueError(f"need 0 <= k <= N={x.size}, got k={k}")
    order = np.argsort(-np.abs(x), kind="stable")
    return SupportSet(tuple(order[:k]), x.size)


def estimate_metrics(est, T0, k):
    """(accuracy, relative size) = (|est & T0| / |est|, |est| / k).

    An empty estimate has accuracy 0.
    """
    if k <= 0:
        raise ValueError("k must be positive")
    hits = len(est & T0)
    alpha = hits / len(est) if len(est) else 0.0
    return alpha, len(est) / k


def synth_support_estimate(T0, size, alpha, seed):
    """Random estimate of the given size with round(alpha * size) true indices."""
    if size < 1:
        raise ValueError("estimate size must be positive")
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"accuracy must lie in [0, 1], got {alpha}")
    good = round_half_up(alpha * size)
    bad = size - good
    inside = T0.as_array()
    outside = T0.complement().as_array()
    if good > inside.size:
        raise ValueError(f"need {good} indices from the true support, which has {inside.size}")
    if bad > outside.size:
        raise ValueError(f"need {bad} indices off the true support, only {outside.size} exist")
    rng = make_rng(seed)
    picked = np.concatenate([rng.choice(inside, good, replace=False), rng.choice(outside, bad, replace=False)])
    return SupportSet(tuple(picked), T0.N)


def split_estimate(est, T0, size1, alpha1, seed):
    """Carve a subset of ``size1`` indices with round(alpha1 * size1) true hits
    out of ``est``; the remainder is the second set."""
    if not 1 <= size1 <= len(est):
        raise ValueError(f"need 1 <= size1 <= |est|={len(est)}, got {size1}")
    if not 0.0 <= alpha1 <= 1.0:
        raise ValueError(f"accuracy must lie in [0, 1], got {alpha1}")
    good = round_half_up(alpha1 * size1)
    bad = size1 - good
    inside = (est & T0).as_array()
    outside = (est - T0).as_array()
    if good > inside.size:
        raise ValueError(f"estimate holds {inside.size} true indices, {good} requested")
    if bad > outside.size:
        raise ValueError(f"estimate holds {outside.size} false indices, {bad} requested")
    rng = make_rng(seed)
    picked = np.concatenate([rng.choice(inside, good, replace=False), rng.choice(outside, bad, replace=False)])
    first = SupportSet(tuple(picked), est.N)
    return first, est - first


def assemble_weights(assignment):
    w = np.ones(assignment.N)
    for s, om in assignment.parts:
        w[s.as_array()] = om
    return w
