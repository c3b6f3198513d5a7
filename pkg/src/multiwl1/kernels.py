"""Hot numeric kernels, each with a numba loop and a numpy twin.

The homotopy solver keeps a Cholesky factor ``L`` of the Gram matrix of the
active columns in the top-left ``m x m`` corner of a preallocated array and
updates it one column at a time. The public names below are bound to the
numba versions unless ``MULTIWL1_DISABLE_NUMBA`` is set (see
:mod:`multiwl1._accel`); both variants stay importable as ``*_numba`` and
``*_numpy`` for direct comparison.
"""
import numpy as np
import scipy.linalg

from ._accel import USE_NUMBA, njit

__all__ = [
    "chol_insert",
    "chol_delete",
    "chol_solve",
    "join_time",
    "USE_NUMBA",
]


# --- numpy ------------------------------------------------------------------

def chol_insert_numpy(L, m, gcol, gdiag):
    """Append a column with cross-Gram ``gcol`` (length m) and squared norm
    ``gdiag``. Returns False, leaving ``L`` untouched, if the new column is
    numerically dependent on the current ones."""
    if m == 0:
        if gdiag <= 0.0:
            return False
        L[0, 0] = np.sqrt(gdiag)
        return True
    row = scipy.linalg.solve_triangular(L[:m, :m], gcol, lower=True, check_finite=False)
    d2 = gdiag - float(row @ row)
    if d2 <= 1e-12 * gdiag:
        return False
    L[m, :m] = row
    L[m, m] = np.sqrt(d2)
    return True


def chol_delete_numpy(L, m, k):
    """Drop column ``k`` from an ``m``-column factor, refactoring by QR."""
    Lr = np.delete(L[:m, :m], k, axis=0)
    r = np.linalg.qr(Lr.T, mode="r")
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    L[: m - 1, : m - 1] = (r * signs[:, None]).T
    L[m - 1, :m] = 0.0
    L[: m - 1, m - 1] = 0.0


def chol_solve_numpy(L, m, rhs):
    return scipy.linalg.cho_solve((L[:m, :m], True), rhs, check_finite=False)


def join_time_numpy(c, a, w, lam, eligible, skip, skip_upper):
    """First t >= 0 at which an eligible |c_i - t a_i| meets (lam - t) w_i.

    ``skip`` (or -1) names a coordinate that just left the active set; its
    upper (``skip_upper``) or lower crossing is ignored because it is tight
    at t = 0. Returns ``(t, i)``, ``(inf, -1)`` when nothing can join; ties
    go to the lowest index.
    """
    cand = np.flatnonzero(eligible)
    if cand.size == 0:
        return np.inf, -1
    ci = c[cand]
    ai = a[cand]
    wi = w[cand]
    lw = lam * wi
    with np.errstate(divide="ignore", invalid="ignore"):
        t1 = np.where(wi - ai > 1e-15, np.maximum(lw - ci, 0.0) / (wi - ai), np.inf)
        t2 = np.where(wi + ai > 1e-15, np.maximum(lw + ci, 0.0) / (wi + ai), np.inf)
    if skip >= 0 and eligible[skip]:
        pos = int(np.searchsorted(cand, skip))
        if skip_upper:
            t1[pos] = np.inf
        else:
            t2[pos] = np.inf
    tt = np.minimum(t1, t2)
    k = int(np.argmin(tt))
    if not np.isfinite(tt[k]):
        return np.inf, -1
    return float(tt[k]), int(cand[k])


# --- numba loops -------------------------------------------------------------

def _forward_sub(L, m, b):
    out = np.empty(m)
    for i in range(m):
        s = b[i]
        for j in range(i):
            s -= L[i, j] * out[j]
        out[i] = s / L[i, i]
    return out


def _chol_insert_loop(L, m, gcol, gdiag):
    if m == 0:
        if gdiag <= 0.0:
            return False
        L[0, 0] = np.sqrt(gdiag)
        return True
    row = _forward_sub(L, m, gcol)
    d2 = gdiag
    for j in range(m):
        d2 -= row[j] * row[j]
    if d2 <= 1e-12 * gdiag:
        return False
    for j in range(m):
        L[m, j] = row[j]
    L[m, m] = np.sqrt(d2)
    return True


def _chol_delete_loop(L, m, k):
    # shift rows below k up; the block is then lower Hessenberg
    for i in range(k, m - 1):
        for j in range(i + 2):
            L[i, j] = L[i + 1, j]
    for j in range(m):
        L[m - 1, j] = 0.0
    # Givens rotations on column pairs (j, j+1) restore triangularity
    for j in range(k, m - 1):
        a = L[j, j]
        b = L[j, j + 1]
        r = np.hypot(a, b)
        if r == 0.0:
            continue
        c = a / r
        s = b / r
        for i in range(j, m - 1):
            lij = L[i, j]
            lij1 = L[i, j + 1]
            L[i, j] = c * lij + s * lij1
            L[i, j + 1] = -s * lij + c * lij1
        L[j, j + 1] = 0.0
    for i in range(m - 1):
        L[i, m - 1] = 0.0


def _chol_solve_loop(L, m, rhs):
    z = _forward_sub(L, m, rhs)
    # column sweep over L^T keeps the inner loop on contiguous rows of L
    for j in range(m - 1, -1, -1):
        z[j] /= L[j, j]
        zj = z[j]
        for i in range(j):
            z[i] -= L[j, i] * zj
    return z


def _join_time_loop(c, a, w, lam, eligible, skip, skip_upper):
    best = np.inf
    arg = -1
    for i in range(c.size):
        if not eligible[i]:
            continue
        wi = w[i]
        lw = lam * wi
        t1 = np.inf
        t2 = np.inf
        if wi - a[i] > 1e-15 and not (i == skip and skip_upper):
            t1 = max(lw - c[i], 0.0) / (wi - a[i])
        if wi + a[i] > 1e-15 and not (i == skip and not skip_upper):
            t2 = max(lw + c[i], 0.0) / (wi + a[i])
        t = min(t1, t2)
        if t < best:
            best = t
            arg = i
    return best, arg


_forward_sub = njit(_forward_sub)
chol_insert_numba = njit(_chol_insert_loop)
chol_delete_numba = njit(_chol_delete_loop)
chol_solve_numba = njit(_chol_solve_loop)
join_time_numba = njit(_join_time_loop)

if USE_NUMBA:
    chol_insert = chol_insert_numba
    chol_delete = chol_delete_numba
    chol_solve = chol_solve_numba
    join_time = join_time_numba
else:
    chol_insert = chol_insert_numpy
    chol_delete = chol_delete_numpy
    chol_solve = chol_solve_numpy
    join_time = join_time_numpy
