"""Empirical check that the top-k support of the l1 solution contains the
dominant entries of a compressible signal."""
from __future__ import annotations

import numpy as np

from ..core import make_gaussian_matrix, make_rng
from ..solver import WeightedBPDNProblem, solve_weighted_bpdn
from ..support import best_k_support
from ..theory import check_signal_class

__all__ = ["make_class_signal", "verify_partial_support_recovery"]


def make_class_signal(N, k, s, eta, seed, tail=True):
    """Random-sign vector whose s largest entries dominate its tail.

    Entries: s "head" values in [1, 2], k - s "body" values in [0.05, 0.5],
    and, if ``tail``, N - k values decaying like j**-2 scaled so that the
    tail l1 mass is half of min(head) / (eta + 1). Positions are shuffled.
    Returns ``(x, S)`` with S the head positions.
    """
    rng = make_rng(seed)
    head = rng.uniform(1.0, 2.0, s)
    body = rng.uniform(0.05, 0.5, k - s)
    if tail and N > k:
        decay = np.arange(1, N - k + 1, dtype=np.float64) ** -2.0
        rest = decay * (0.5 * head.min() / (eta + 1.0) / decay.sum())
    else:
        rest = np.zeros(N - k)
    mags = np.concatenate([head, body, rest])
    perm = rng.permutation(N)
    x = np.empty(N)
    x[perm] = mags * rng.choice(np.array([-1.0, 1.0]), N)
    return x, np.sort(perm[:s])


def verify_partial_support_recovery(N, n, k, s, trials, seed, eta=6.0, tail=True):
    """Fraction of trials where best_k_support(x*, k) contains the head set.

    Trial t draws its matrix and signal from ``SeedSequence(seed + t)``.
    """
    if not 1 <= s <= k < n < N:
        raise ValueError(f"need 1 <= s <= k < n < N, got s={s}, k={k}, n={n}, N={N}")
    if trials < 1:
        raise ValueError("trials must be positive")
    hits = 0
    for t in range(trials):
        ms, ss = np.random.SeedSequence(seed + t).spawn(2)
        A = make_gaussian_matrix(n, N, ms)
        x, S = make_class_signal(N, k, s, eta, ss, tail)
        if not check_signal_class(x, k, s, eta):
            raise AssertionError("constructed signal is outside the class")
        res = solve_weighted_bpdn(WeightedBPDNProblem(A, A.forward(x)))
        est = set(best_k_support(res.x, k).indices)
        hits += set(S.tolist()) <= est
    return hits / trials
