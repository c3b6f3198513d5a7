"""Synthetic sweep: plain vs two-set vs three-set weighted l1.

Seed policy: trial ``t`` of a sweep uses ``seed = cfg.seed + t``. That seed
feeds a ``numpy.random.SeedSequence`` whose spawned children drive, in
order, the matrix, the signal, the support estimate, the split and the
noise. The matrix and signal therefore depend on the trial seed alone,
which lets a sweep solve the unweighted problem once per trial and reuse
it for every grid cell.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core import make_gaussian_matrix, make_rng
from ..solver import WeightedBPDNProblem, solve_weighted_bpdn
from ..support import (
    SupportSet,
    WeightAssignment,
    assemble_weights,
    estimate_metrics,
    round_half_up,
    split_estimate,
    synth_support_estimate,
)
from .config import SyntheticConfig
from .signals import gen_sparse_signal, snr
from .tables import ResultTable

__all__ = ["TrialRecord", "run_synthetic_trial", "run_synthetic_sweep", "feasible_size1"]


@dataclass(frozen=True)
class TrialRecord:
    seed: int
    alpha: float
    omega: float
    snr_plain: float
    snr_two: float
    snr_three: float
    alpha_real: float
    alpha1: float
    alpha2: float
    size1: int
    status_plain: str
    status_two: str
    status_three: str

    FIELDS = (
        "seed", "alpha", "omega", "snr_plain", "snr_two", "snr_three", "alpha_real",
        "alpha1", "alpha2", "size1", "status_plain", "status_two", "status_three",
    )

    def as_row(self):
        return tuple(getattr(self, f) for f in self.FIELDS)


def feasible_size1(size1, alpha1, hits, misses):
    """Largest s <= size1 whose split round(alpha1 s) / s fits the estimate.

    With a poor estimate (few true indices) the requested first set may need
    more true indices than exist; shrinking it keeps its accuracy at alpha1.
    """
    for s in range(size1, 0, -1):
        good = round_half_up(alpha1 * s)
        if good <= hits and s - good <= misses:
            return s
    raise ValueError("no first-set size can reach the requested accuracy")


class _TrialData:
    def __init__(self, cfg, seed):
        self.seed = int(seed)
        streams = np.random.SeedSequence(self.seed).spawn(5)
        self.est_stream, self.split_stream = streams[2], streams[3]
        self.A = make_gaussian_matrix(cfg.n, cfg.N, streams[0])
        if cfg.signal_model == "gaussian":
            self.x = gen_sparse_signal(cfg.N, cfg.k, "gaussian", streams[1])
        else:
            self.x = gen_sparse_signal(cfg.N, cfg.k, "power-law", streams[1], cfg.power_c, cfg.power_p)
        self.y = self.A.forward(self.x)
        if cfg.noise and cfg.epsilon > 0.0:
            e = make_rng(streams[4]).standard_normal(cfg.n)
            self.y = self.y + cfg.epsilon * e / np.linalg.norm(e)
        # the true support is the top-k set, which for the gaussian model is supp(x)
        order = np.argsort(-np.abs(self.x), kind="stable")
        self.T0 = SupportSet(tuple(order[: cfg.k]), cfg.N)
        self.eps = cfg.epsilon
        self._plain = None

    def solve(self, w):
        return solve_weighted_bpdn(WeightedBPDNProblem(self.A, self.y, self.eps, w))

    def plain(self):
        if self._plain is None:
            self._plain = self.solve(None)
        return self._plain


def run_synthetic_trial(cfg, alpha, omega, seed, _data=None):
    """One seeded trial; returns a :class:`TrialRecord`."""
    data = _data if _data is not None else _TrialData(cfg, seed)
    est = synth_support_estimate(data.T0, cfg.size, alpha, data.est_stream)
    a_real, _ = estimate_metrics(est, data.T0, cfg.k)
    hits = len(est & data.T0)
    size1 = feasible_size1(cfg.size1, cfg.alpha1, hits, len(est) - hits)
    T1, T2 = split_estimate(est, data.T0, size1, cfg.alpha1, data.split_stream)
    a1, _ = estimate_metrics(T1, data.T0, cfg.k)
    a2, _ = estimate_metrics(T2, data.T0, cfg.k)

    N = cfg.N
    w2 = assemble_weights(WeightAssignment(((est, omega),), N))
    w3 = assemble_weights(WeightAssignment(((T1, cfg.omega1), (T2, omega)), N))
    plain = data.plain()
    two = data.solve(w2)
    three = data.solve(w3)
    return TrialRecord(
        seed=data.seed,
        alpha=float(alpha),
        omega=float(omega),
        snr_plain=snr(data.x, plain.x),
        snr_two=snr(data.x, two.x),
        snr_three=snr(data.x, three.x),
        alpha_real=a_real,
        alpha1=a1,
        alpha2=a2,
        size1=size1,
        status_plain=plain.status,
        status_two=two.status,
        status_three=three.status,
    )


SWEEP_COLUMNS = (
    "alpha", "omega", "trials", "snr_plain", "snr_two", "snr_three",
    "alpha_real", "alpha1", "alpha2", "unconverged",
)


def run_synthetic_sweep(cfg, raw=False):
    """Mean SNRs per (alpha, omega) cell, rows ordered alpha-major.

    ``raw=True`` returns every trial record instead.
    """
    if not isinstance(cfg, SyntheticConfig):
        raise TypeError("cfg must be a SyntheticConfig")
    cells = [(a, w) for a in cfg.alpha_grid for w in cfg.omega_grid]
    records = {cell: [None] * cfg.trials for cell in cells}
    for t in range(cfg.trials):
        data = _TrialData(cfg, cfg.seed + t)
        for a, w in cells:
            records[(a, w)][t] = run_synthetic_trial(cfg, a, w, data.seed, _data=data)
    if raw:
        rows = [rec.as_row() for cell in cells for rec in records[cell]]
        return ResultTable(TrialRecord.FIELDS, rows)
    rows = []
    for a, w in cells:
        recs = records[(a, w)]
        mean = lambda f: float(np.mean([getattr(r, f) for r in recs]))  # noqa: E731
        bad = sum(
            1 for r in recs for s in (r.status_plain, r.status_two, r.status_three) if s != "converged"
        )
        rows.append((
            a, w, cfg.trials, mean("snr_plain"), mean("snr_two"), mean("snr_three"),
            mean("alpha_real"), mean("alpha1"), mean("alpha2"), bad,
        ))
    return ResultTable(SWEEP_COLUMNS, rows)
