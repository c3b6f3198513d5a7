"""Numba loops vs numpy twins for the solver kernels, plus end-to-end solves.

    python3 benchmarks/bench_kernels.py [--repeat 200]

Kernel timings call both variants in-process. The end-to-end rows rerun
this script in a child process with MULTIWL1_DISABLE_NUMBA set, since the
solver binds its kernels at import time.
"""
import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np

from multiwl1 import kernels
from multiwl1.core import RestrictedDctSynthesis, make_gaussian_matrix, make_rng
from multiwl1.experiments import gen_sparse_signal, speech_like_signal
from multiwl1.solver import WeightedBPDNProblem, solve_weighted_bpdn


def best_of(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def factor(m, n, seed=0):
    rng = make_rng(seed)
    B = rng.standard_normal((n, m)) / np.sqrt(n)
    L = np.zeros((m + 1, m + 1))
    L[:m, :m] = np.linalg.cholesky(B.T @ B)
    col = rng.standard_normal(n) / np.sqrt(n)
    return L, B, col


def kernel_rows(repeat):
    rows = []
    for m in (35, 100, 400):
        n = max(2 * m, 128)
        L, B, col = factor(m, n)
        gcol, gdiag = B.T @ col, float(col @ col)
        rhs = np.ones(m)
        N = 2048
        rng = make_rng(1)
        c, a, w = rng.standard_normal(N), rng.standard_normal(N), rng.uniform(0.1, 1.0, N)
        eligible = rng.random(N) < 0.8
        cases = {
            "chol_insert": lambda f: f(L.copy(), m, gcol, gdiag),
            "chol_delete": lambda f: f(L.copy(), m, m // 2),
            "chol_solve": lambda f: f(L, m, rhs),
            "join_time": lambda f: f(c, a, w, 3.0, eligible, 5, True),
        }
        for name, call in cases.items():
            fnb = getattr(kernels, f"{name}_numba")
            fnp = getattr(kernels, f"{name}_numpy")
            call(fnb)  # compile outside the timing
            tb = best_of(lambda: call(fnb), repeat)
            tp = best_of(lambda: call(fnp), repeat)
            rows.append((name, m, tb, tp))
    return rows


def solver_times():
    out = {}
    A = make_gaussian_matrix(100, 500, 0)
    x = gen_sparse_signal(500, 35, "gaussian", 1)
    prob = WeightedBPDNProblem(A, A.forward(x))
    solve_weighted_bpdn(prob)
    t0 = time.perf_counter()
    solve_weighted_bpdn(prob)
    out["gaussian 100x500"] = time.perf_counter() - t0

    s = speech_like_signal(2048)
    kept = np.sort(make_rng(2).choice(2048, 512, replace=False))
    op = RestrictedDctSynthesis(kept, 2048)
    prob = WeightedBPDNProblem(op, s[kept], 1e-6 * np.linalg.norm(s[kept]))
    t0 = time.perf_counter()
    solve_weighted_bpdn(prob)
    out["dct block 512x2048"] = time.perf_counter() - t0
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=200)
    ap.add_argument("--solver-only", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()
    if args.solver_only:
        print(json.dumps(solver_times()))
        return

    print(f"{'kernel':<12} {'m':>4} {'numba us':>10} {'numpy us':>10} {'speedup':>8}")
    for name, m, tb, tp in kernel_rows(args.repeat):
        print(f"{name:<12} {m:>4} {tb * 1e6:>10.1f} {tp * 1e6:>10.1f} {tp / tb:>8.1f}")

    timings = {}
    for label, flag in (("numba", "0"), ("numpy", "1")):
        env = dict(os.environ, MULTIWL1_DISABLE_NUMBA=flag)
        res = subprocess.run(
            [sys.executable, __file__, "--solver-only"], env=env, capture_output=True, text=True, check=True
        )
        timings[label] = json.loads(res.stdout.strip().splitlines()[-1])
    print()
    print(f"{'solve':<20} {'numba s':>9} {'numpy s':>9}")
    for case in timings["numba"]:
        print(f"{case:<20} {timings['numba'][case]:>9.3f} {timings['numpy'][case]:>9.3f}")


if __name__ == "__main__":
    main()
