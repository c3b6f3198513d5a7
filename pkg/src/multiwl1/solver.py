"""Weighted basis pursuit denoise.

Solves

    minimize  sum_i w_i |u_i|   subject to  ||A u - y||_2 <= eps

with ``0 <= w_i <= 1`` by exact homotopy on the weighted lasso path. The
only linear algebra is a Cholesky factor of the active Gram matrix, updated
one column at a time (see :mod:`multiwl1.kernels`); the operator is touched
through ``forward``/``adjoint`` and single-column extraction, so restricted
DCT operators never have to be formed densely.

:func:`oracle_basis_pursuit` is an independent brute-force check for tiny
equality-constrained instances.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .core import DenseOperator, LinearOperator, as_real_vector
from .kernels import chol_delete, chol_insert, chol_solve, join_time

__all__ = [
    "WeightedBPDNProblem",
    "SolverOptions",
    "SolverResult",
    "CONVERGED",
    "ITERATION_LIMIT",
    "INFEASIBLE",
    "solve_weighted_bpdn",
    "oracle_basis_pursuit",
    "weighted_l1_norm",
]

CONVERGED = "converged"
ITERATION_LIMIT = "iteration-limit"
INFEASIBLE = "infeasible-detected"

_PRUNE_REL = 1e-6


def weighted_l1_norm(u, w):
    return float(np.dot(w, np.abs(u)))


@dataclass(frozen=True)
class WeightedBPDNProblem:
    operator: LinearOperator
    y: np.ndarray
    epsilon: float = 0.0
    weights: np.ndarray | None = None

    def __post_init__(self):
        op = self.operator
        y = as_real_vector(self.y, "y")
        if y.size != op.rows:
            raise ValueError(f"y has length {y.size}, operator has {op.rows} rows")
        w = np.ones(op.cols) if self.weights is None else as_real_vector(self.weights, "weights")
        if w.size != op.cols:
            raise ValueError(f"weights have length {w.size}, operator has {op.cols} columns")
        if np.any(w < 0.0) or np.any(w > 1.0):
            raise ValueError("weights must lie in [0, 1]")
        eps = float(self.epsilon)
        if not np.isfinite(eps) or eps < 0.0:
            raise ValueError(f"epsilon must be a finite nonnegative number, got {self.epsilon}")
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "epsilon", eps)


@dataclass(frozen=True)
class SolverOptions:
    feas_tol: float = 1e-6
    opt_tol: float = 1e-6
    max_iter: int = 10_000

    def __post_init__(self):
        if not (self.feas_tol > 0 and self.opt_tol > 0 and self.max_iter > 0):
            raise ValueError("solver tolerances and max_iter must be positive")


@dataclass
class SolverResult:
    x: np.ndarray
    residual_norm: float
    objective: float
    iterations: int
    status: str
    info: dict = field(default_factory=dict)

    @property
    def converged(self):
        return self.status == CONVERGED


def residual_bound(epsilon, y_norm, feas_tol):
    """Largest residual norm accepted as feasible."""
    return epsilon * (1.0 + feas_tol) + feas_tol * y_norm


def _finish(problem, x, iterations, status, **info):
    r = problem.operator.forward(x) - problem.y
    return SolverResult(
        x=x,
        residual_norm=float(np.linalg.norm(r)),
        objective=weighted_l1_norm(x, problem.weights),
        iterations=iterations,
        status=status,
        info=info,
    )


def solve_weighted_bpdn(problem, options=None):
    """Solve a :class:`WeightedBPDNProblem` by following the weighted lasso path.

    The minimizer of ``0.5 ||A u - y||^2 + lam * sum_i w_i |u_i|`` is piecewise
    linear in ``lam``. Starting from the largest useful ``lam`` the path is
    tracked breakpoint by breakpoint (a coordinate joins or leaves the active
    set) until the residual norm drops to ``epsilon``; that point solves the
    constrained problem. Zero-weight coordinates are active from the start.
    """
    options = options or SolverOptions()
    op = problem.operator
    w = problem.weights
    n, N = op.shape
    y_norm = float(np.linalg.norm(problem.y))

    if y_norm <= problem.epsilon:
        return _finish(problem, np.zeros(N), 0, CONVERGED)

    # unit-norm data keeps every threshold relative
    b = problem.y / y_norm
    sigma = problem.epsilon / y_norm
    path = _Path(op, b, w)
    status, steps = path.run(sigma, options.max_iter, residual_bound(sigma, 1.0, options.feas_tol))
    x = path.x * y_norm
    bound = residual_bound(problem.epsilon, y_norm, options.feas_tol)
    if status == CONVERGED and path.lam == 0.0 and path.active:
        # end of the path is a plain least-squares fit on the active columns;
        # redo it on the raw data with an orthogonal method so that equal
        # active sets give bit-equal answers regardless of the path taken
        S = np.sort(np.asarray(path.active, dtype=np.intp))
        # tiny coefficients are usually zeros the path never removed; drop
        # them first and fall back to the full active set if that breaks the fit
        for keep in (S[np.abs(x[S]) > _PRUNE_REL * np.max(np.abs(x))], S):
            refit = np.zeros(N)
            refit[keep] = np.linalg.lstsq(op.columns(keep), problem.y, rcond=None)[0]
            if np.linalg.norm(op.forward(refit) - problem.y) <= bound:
                x = refit
                break
    result = _finish(problem, x, steps, status)
    result.info["active"] = len(path.active)
    result.info["lambda"] = path.lam * y_norm
    if result.status == CONVERGED and result.residual_norm > bound:
        result.status = ITERATION_LIMIT if steps >= options.max_iter else INFEASIBLE
    return result


class _Path:
    """Mutable state of one homotopy run on unit-norm data ``b``."""

    _RESYNC_EVERY = 10

    def __init__(self, op, b, w):
        n, N = op.shape
        self.op = op
        self.b = b
        self.w = w
        self.nonfree = w > 0.0
        self.L = np.zeros((n, n))
        self.Bt = np.zeros((n, n))  # active columns stored as rows
        self.active = []
        self.is_active = np.zeros(N, dtype=bool)
        self.blocked = np.zeros(N, dtype=bool)
        self.signs = np.zeros(N)
        self.x = np.zeros(N)
        self.r = b.copy()
        self.c = op.adjoint(b)
        self.lam = 0.0

    # active-set bookkeeping

    def _insert(self, i):
        m = len(self.active)
        if m >= self.Bt.shape[0]:
            self.blocked[i] = True
            return False
        col = self.op.columns([i])[:, 0]
        gcol = self.Bt[:m] @ col
        if not chol_insert(self.L, m, gcol, float(col @ col)):
            self.blocked[i] = True
            return False
        self.Bt[m] = col
        self.active.append(i)
        self.is_active[i] = True
        return True

    def _remove(self, i):
        k = self.active.index(i)
        m = len(self.active)
        chol_delete(self.L, m, k)
        self.Bt[k : m - 1] = self.Bt[k + 1 : m]
        self.Bt[m - 1] = 0.0
        del self.active[k]
        self.is_active[i] = False
        self.signs[i] = 0.0
        self.x[i] = 0.0

    def _resync(self):
        """Recompute x, r and c exactly from the current factorization."""
        m = len(self.active)
        idx = np.asarray(self.active, dtype=np.intp)
        if m:
            rhs = self.Bt[:m] @ self.b - self.lam * self.w[idx] * self.signs[idx]
            self.x[idx] = chol_solve(self.L, m, rhs)
            self.r = self.b - self.x[idx] @ self.Bt[:m]
        else:
            self.r = self.b.copy()
        self.c = self.op.adjoint(self.r)

    # path following

    def run(self, sigma, max_steps, tol):
        w = self.w
        free_idx = np.flatnonzero(~self.nonfree)
        for i in free_idx:
            self._insert(i)
        if self.active:
            self._resync()
        rnorm = np.linalg.norm(self.r)
        if rnorm <= sigma or (rnorm <= tol and not np.any(self.nonfree)):
            return CONVERGED, 0
        if not np.any(self.nonfree):
            return INFEASIBLE, 0

        cand = self.nonfree & ~self.is_active & ~self.blocked
        ratio = np.where(cand, np.abs(self.c) / np.where(self.nonfree, w, 1.0), -1.0)
        j = int(np.argmax(ratio))
        self.lam = float(ratio[j])
        if self.lam <= 1e-14:
            # r is orthogonal to every column: nothing left to fit
            return (CONVERGED if rnorm <= tol else INFEASIBLE), 0
        self.signs[j] = np.sign(self.c[j])
        self._insert(j)

        just_joined, just_left = j, -1
        steps = 0
        while steps < max_steps:
            steps += 1
            m = len(self.active)
            idx = np.asarray(self.active, dtype=np.intp)
            d = chol_solve(self.L, m, w[idx] * self.signs[idx])
            q = d @ self.Bt[:m]
            a = self.op.adjoint(q)

            # next coordinate to join: |c_i - t a_i| reaches (lam - t) w_i;
            # one that just left is tight at t = 0 on the side it left through
            eligible = self.nonfree & ~self.is_active & ~self.blocked
            skip_upper = just_left >= 0 and self.c[just_left] > 0.0
            t_join, i_join = join_time(self.c, a, w, self.lam, eligible, just_left, skip_upper)

            # next active coordinate to hit zero
            t_leave, i_leave = np.inf, -1
            xs = self.x[idx]
            shrink = (xs * d < 0.0) & self.nonfree[idx]
            if just_joined >= 0:
                shrink &= idx != just_joined
            if np.any(shrink):
                tl = -xs[shrink] / d[shrink]
                k = int(np.argmin(tl))
                t_leave = float(tl[k])
                i_leave = int(idx[shrink][k])

            t = min(t_join, t_leave, self.lam)
            stop = t == self.lam

            # residual reaching sigma inside this segment
            if sigma > 0.0:
                qq = float(q @ q)
                rq = float(self.r @ q)
                excess = float(self.r @ self.r) - sigma * sigma
                disc = rq * rq - qq * excess
                if qq > 0.0 and disc >= 0.0:
                    t_res = excess / (rq + np.sqrt(disc)) if rq > 0.0 else np.inf
                    if 0.0 <= t_res <= t:
                        t, stop = t_res, True
                        t_join = t_leave = np.inf

            self.x[idx] = xs + t * d
            self.r = self.r - t * q
            self.c = self.c - t * a
            self.lam = max(self.lam - t, 0.0)

            if stop:
                if self.lam == 0.0:
                    self._resync()
                return CONVERGED, steps

            just_joined, just_left = -1, -1
            if t_leave <= t_join:
                self._remove(i_leave)
                just_left = i_leave
            else:
                self.signs[i_join] = np.sign(self.c[i_join])
                if self._insert(i_join):
                    just_joined = i_join
            if steps % self._RESYNC_EVERY == 0:
                self._resync()
        return ITERATION_LIMIT, steps


def oracle_basis_pursuit(A, y, weights, tol=1e-9):
    """Exact minimizer of sum w_i|u_i| s.t. A u = y by vertex enumeration.

    Every column subset of size <= n with full column rank is tried; the
    least-squares solution on that subset is kept if it reproduces ``y``.
    An optimal vertex of the equivalent linear program is always among these
    candidates. Intended for N <= 16 only.
    """
    if isinstance(A, LinearOperator):
        if not isinstance(A, DenseOperator):
            raise TypeError("oracle needs a dense operator")
        M = A.matrix
    else:
        M = np.asarray(A, dtype=np.float64)
    n, N = M.shape
    if N > 16:
        raise ValueError(f"oracle is combinatorial; N={N} exceeds 16")
    if n > N:
        raise ValueError("oracle expects n <= N")
    y = as_real_vector(y, "y")
    w = as_real_vector(weights, "weights")
    scale = max(1.0, float(np.linalg.norm(y)))

    best = None
    best_obj = np.inf
    for size in range(0, n + 1):
        for subset in itertools.combinations(range(N), size):
            cols = list(subset)
            if size == 0:
                z = np.zeros(0)
                res = float(np.linalg.norm(y))
            else:
                B = M[:, cols]
                z, _, rank, _ = np.linalg.lstsq(B, y, rcond=None)
                if rank < size:
                    continue
                res = float(np.linalg.norm(B @ z - y))
            if res > tol * scale:
                continue
            obj = float(np.dot(w[cols], np.abs(z))) if size else 0.0
            if obj < best_obj:
                best_obj = obj
                best = np.zeros(N)
                best[cols] = z
    if best is None:
        raise ValueError("y is not in the range of A (no feasible basic solution)")
    return best
