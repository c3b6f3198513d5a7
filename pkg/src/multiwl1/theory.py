"""Closed-form recovery guarantees for multi-set weighted l1 minimization.

Notation follows the usual RIP conventions: ``a > 1`` is the aspect
parameter, ``delta_ak`` and ``delta_a1k`` are the restricted isometry
constants of orders ``a*k`` and ``(a+1)*k``. A support estimate made of
``m`` disjoint sets is summarized by per-set triples ``(rho, alpha, omega)``:
relative size ``|T_j| / k``, accuracy ``|T_j & T0| / |T_j|`` and weight.

Everything here is a pure function of its arguments.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import DenseOperator, LinearOperator, as_real_vector, make_rng

__all__ = [
    "RipParams",
    "SupportEstimateProfile",
    "TheoryReport",
    "gamma",
    "single_set_gamma",
    "sufficient_delta_bound",
    "check_rip_condition",
    "error_constants",
    "nsp_constant",
    "eta",
    "eta_from_nsp",
    "eta_closed_form",
    "check_signal_class",
    "power_law_threshold",
    "optimal_weights",
    "theory_report",
    "estimate_rip_delta_lower_bound",
]


@dataclass(frozen=True)
class RipParams:
    a: float
    delta_ak: float
    delta_a1k: float

    def __post_init__(self):
        if not self.a > 1.0:
            raise ValueError(f"aspect parameter a must exceed 1, got {self.a}")
        for name in ("delta_ak", "delta_a1k"):
            d = getattr(self, name)
            if not 0.0 <= d < 1.0:
                raise ValueError(f"{name} must lie in [0, 1), got {d}")


@dataclass(frozen=True)
class SupportEstimateProfile:
    """Per-set ``(rho, alpha, omega)`` triples of a partitioned support estimate."""

    sets: tuple

    def __post_init__(self):
        sets = tuple(tuple(float(v) for v in t) for t in self.sets)
        if not sets:
            raise ValueError("a profile needs at least one set")
        for rho, alpha, omega in sets:
            if rho < 0.0:
                raise ValueError(f"relative size must be nonnegative, got {rho}")
            if not 0.0 <= alpha <= 1.0:
                raise ValueError(f"accuracy must lie in [0, 1], got {alpha}")
            if not 0.0 <= omega <= 1.0:
                raise ValueError(f"weight must lie in [0, 1], got {omega}")
        object.__setattr__(self, "sets", sets)

    @classmethod
    def from_lists(cls, rhos, alphas, omegas):
        if not len(rhos) == len(alphas) == len(omegas):
            raise ValueError("rho, alpha and omega lists differ in length")
        return cls(tuple(zip(rhos, alphas, omegas)))

    @property
    def m(self):
        return len(self.sets)


@dataclass(frozen=True)
class TheoryReport:
    gamma: float
    delta_hat: float
    C0: float
    C1: float
    condition_holds: bool


def gamma(profile):
    """sum(omega_j) - (m - 1) + sum((1 - omega_j) * sqrt(1 + rho_j - 2 alpha_j rho_j)).

    Equals 1 for standard l1 (all weights 1); smaller is better.
    """
    total = 1.0 - profile.m
    for rho, alpha, omega in profile.sets:
        radicand = 1.0 + rho - 2.0 * alpha * rho
        if radicand < 0.0:
            raise ValueError(f"negative radicand 1 + rho - 2 alpha rho = {radicand}")
        total += omega + (1.0 - omega) * math.sqrt(radicand)
    return total


def single_set_gamma(rho, alpha, omega):
    """Multiplier omega + (1 - omega) sqrt(1 + rho - 2 alpha rho) of the two-set case."""
    return omega + (1.0 - omega) * math.sqrt(1.0 + rho - 2.0 * alpha * rho)


def sufficient_delta_bound(gamma_value, a):
    """(a - gamma^2) / (a + gamma^2); negative means no RIP constant can satisfy it."""
    if not a > 1.0:
        raise ValueError(f"aspect parameter a must exceed 1, got {a}")
    g2 = gamma_value * gamma_value
    return (a - g2) / (a + g2)


def check_rip_condition(profile, rip):
    """Strict test of delta_ak + (a/gamma^2) delta_a1k < a/gamma^2 - 1.

    For gamma == 0 the limit of the inequality is used, which only asks
    delta_a1k < 1 (already guaranteed by :class:`RipParams`).
    """
    g = gamma(profile)
    if g == 0.0:
        return rip.delta_a1k < 1.0
    ratio = rip.a / (g * g)
    return rip.delta_ak + ratio * rip.delta_a1k < ratio - 1.0


def _denominator(gamma_value, rip):
    return math.sqrt(1.0 - rip.delta_a1k) - gamma_value / math.sqrt(rip.a) * math.sqrt(1.0 + rip.delta_ak)


def error_constants(gamma_value, rip):
    """Noise and compressibility constants ``(C0, C1)`` of the error bound."""
    denom = _denominator(gamma_value, rip)
    if denom <= 0.0:
        raise ValueError("recovery condition violated: error-bound denominator is not positive")
    sa = math.sqrt(rip.a)
    c0 = 2.0 * (1.0 + gamma_value / sa) / denom
    c1 = 2.0 / sa * (math.sqrt(1.0 - rip.delta_a1k) + math.sqrt(1.0 + rip.delta_ak)) / denom
    return c0, c1


def nsp_constant(rip):
    """Null space constant c0 = 1 + sqrt(1 + delta_ak) / (sqrt(a) sqrt(1 - delta_a1k)).

    Valid only when delta_a1k < (a - 1) / (a + 1).
    """
    if not rip.delta_a1k < (rip.a - 1.0) / (rip.a + 1.0):
        raise ValueError(
            f"null space property not implied: delta_a1k={rip.delta_a1k} "
            f">= (a-1)/(a+1)={(rip.a - 1.0) / (rip.a + 1.0)}"
        )
    return 1.0 + math.sqrt(1.0 + rip.delta_ak) / (math.sqrt(rip.a) * math.sqrt(1.0 - rip.delta_a1k))


def eta_from_nsp(c0):
    if not c0 < 2.0:
        raise ValueError(f"eta needs c0 < 2, got {c0}")
    return 2.0 * c0 / (2.0 - c0)


def eta_closed_form(rip):
    """2 (sqrt(a) sqrt(1 - d1) + sqrt(1 + d0)) / (sqrt(a) sqrt(1 - d1) - sqrt(1 + d0))."""
    p = math.sqrt(rip.a) * math.sqrt(1.0 - rip.delta_a1k)
    q = math.sqrt(1.0 + rip.delta_ak)
    if not p > q:
        raise ValueError("eta undefined: sqrt(a(1 - delta_a1k)) <= sqrt(1 + delta_ak)")
    return 2.0 * (p + q) / (p - q)


def eta(rip):
    """Signal-class parameter 2 c0 / (2 - c0) built from the null space constant."""
    return eta_from_nsp(nsp_constant(rip))


def check_signal_class(x, k, s, eta_value):
    """True iff the s-th largest |x_j| is at least (eta + 1) times the l1 mass
    outside the k largest entries."""
    x = as_real_vector(x, "x")
    if not 1 <= s <= k <= x.size:
        raise ValueError(f"need 1 <= s <= k <= N, got s={s}, k={k}, N={x.size}")
    if not eta_value > 0.0:
        raise ValueError("eta must be positive")
    mags = np.sort(np.abs(x))[::-1]
    tail = float(mags[k:].sum())
    return bool(mags[s - 1] >= (eta_value + 1.0) * tail)


def power_law_threshold(p, eta_value):
    """((p - 1) / (eta + 1)) ** (1 / p): accuracy above which a smaller
    top-k estimate of a power-law signal is the more accurate one."""
    if not p > 1.0:
        raise ValueError(f"decay exponent must exceed 1, got {p}")
    if not eta_value > 0.0:
        raise ValueError("eta must be positive")
    return ((p - 1.0) / (eta_value + 1.0)) ** (1.0 / p)


def optimal_weights(alphas):
    """Weights minimizing gamma: 0 for sets more than half accurate, else 1."""
    out = []
    for alpha in alphas:
        if not 0.0 <= alpha <= 1.0:
            raise ValueError(f"accuracy must lie in [0, 1], got {alpha}")
        out.append(0.0 if alpha > 0.5 else 1.0)
    return out


def theory_report(profile, rip):
    g = gamma(profile)
    holds = check_rip_condition(profile, rip)
    try:
        c0, c1 = error_constants(g, rip)
    except ValueError:
        c0 = c1 = math.inf
    return TheoryReport(g, sufficient_delta_bound(g, rip.a), c0, c1, holds)


def estimate_rip_delta_lower_bound(A, k, trials, seed):
    """Monte-Carlo lower bound on delta_k.

    Each trial draws a uniformly random k-column support and records
    ``max(s_max^2 - 1, 1 - s_min^2)`` of that submatrix; the maximum over
    trials can only underestimate the true constant. Supports are drawn from
    one PCG64 stream, so a run with more trials extends a shorter one.
    """
    if isinstance(A, LinearOperator):
        if not isinstance(A, DenseOperator):
            A = DenseOperator(A.to_dense())
        M = A.matrix
    else:
        M = np.asarray(A, dtype=np.float64)
    n, N = M.shape
    if k < 1 or k > N:
        raise ValueError(f"need 1 <= k <= N={N}, got k={k}")
    if trials < 1:
        raise ValueError("trials must be positive")
    rng = make_rng(seed)
    best = 0.0
    for _ in range(trials):
        cols = rng.choice(N, size=k, replace=False)
        sv = np.linalg.svd(M[:, cols], compute_uv=False)
        smin = sv[-1] if k <= n else 0.0
        best = max(best, sv[0] ** 2 - 1.0, 1.0 - smin**2)
    return float(best)
