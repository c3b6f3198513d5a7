"""Vectors, measurement operators and the orthonormal DCT pair.

All randomness goes through :func:`make_rng`, which wraps numpy's PCG64
bit generator (``numpy.random.default_rng``). A given integer seed therefore
produces the same stream on every platform numpy supports.
"""
from __future__ import annotations

import numpy as np
import scipy.fft

__all__ = [
    "LinearOperator",
    "DenseOperator",
    "RestrictedDctSynthesis",
    "as_real_vector",
    "make_rng",
    "make_gaussian_matrix",
    "make_restricted_synthesis_operator",
    "dct_forward",
    "dct_inverse",
    "adjoint_mismatch",
    "save_matrix_csv",
    "load_matrix_csv",
    "save_vector_txt",
    "load_vector_txt",
]


def make_rng(seed):
    """PCG64 generator for ``seed`` (an int or a ``SeedSequence``)."""
    return np.random.Generator(np.random.PCG64(seed))


def as_real_vector(values, name="vector"):
    """Return ``values`` as a finite 1-D float64 array (copy-free if possible)."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or Inf entries")
    return arr


class LinearOperator:
    """An n x N real linear map exposing ``forward`` and ``adjoint`` only.

    Subclasses implement ``_forward`` / ``_adjoint``; the public methods check
    lengths. Instances are treated as immutable.
    """

    kind = "abstract"

    def __init__(self, n, N):
        if n < 1 or N < 1:
            raise ValueError(f"operator dimensions must be positive, got {n}x{N}")
        self._shape = (int(n), int(N))

    @property
    def shape(self):
        return self._shape

    @property
    def rows(self):
        return self._shape[0]

    @property
    def cols(self):
        return self._shape[1]

    def forward(self, u):
        u = np.asarray(u, dtype=np.float64)
        if u.shape != (self.cols,):
            raise ValueError(f"forward expects length {self.cols}, got {u.shape}")
        return self._forward(u)

    def adjoint(self, v):
        v = np.asarray(v, dtype=np.float64)
        if v.shape != (self.rows,):
            raise ValueError(f"adjoint expects length {self.rows}, got {v.shape}")
        return self._adjoint(v)

    def columns(self, idx):
        """Dense n x len(idx) block of columns, built by applying ``forward``."""
        idx = np.asarray(idx, dtype=np.intp)
        out = np.empty((self.rows, idx.size))
        e = np.zeros(self.cols)
        for j, i in enumerate(idx):
            e[i] = 1.0
            out[:, j] = self._forward(e)
            e[i] = 0.0
        return out

    def to_dense(self):
        return self.columns(np.arange(self.cols))

    def _forward(self, u):
        raise NotImplementedError

    def _adjoint(self, v):
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}({self.rows}x{self.cols})"


class DenseOperator(LinearOperator):
    """Explicit matrix. The array is copied and marked read-only."""

    kind = "dense"

    def __init__(self, matrix):
        mat = np.array(matrix, dtype=np.float64, order="C")
        if mat.ndim != 2:
            raise ValueError("dense operator needs a 2-D matrix")
        if not np.all(np.isfinite(mat)):
            raise ValueError("matrix contains NaN or Inf entries")
        super().__init__(*mat.shape)
        mat.setflags(write=False)
        self._mat = mat
        self._mat_t = np.ascontiguousarray(mat.T)
        self._mat_t.setflags(write=False)

    @property
    def matrix(self):
        return self._mat

    def _forward(self, u):
        return self._mat @ u

    def _adjoint(self, v):
        return self._mat_t @ v

    def columns(self, idx):
        return self._mat[:, np.asarray(idx, dtype=np.intp)]

    def to_dense(self):
        return self._mat.copy()


def dct_forward(s):
    """Orthonormal DCT-II."""
    s = as_real_vector(s, "signal")
    if s.size == 0:
        raise ValueError("DCT of an empty vector")
    return scipy.fft.dct(s, type=2, norm="ortho")


def dct_inverse(c):
    """Orthonormal DCT-III, the inverse of :func:`dct_forward`."""
    c = as_real_vector(c, "coefficients")
    if c.size == 0:
        raise ValueError("inverse DCT of an empty vector")
    return scipy.fft.idct(c, type=2, norm="ortho")


class RestrictedDctSynthesis(LinearOperator):
    """c -> inverse_dct(c)[kept]: DCT synthesis followed by sample restriction.

    The rows are rows of an orthogonal matrix, so ``A @ A.T`` is the identity.
    """

    kind = "restricted-dct-synthesis"

    def __init__(self, kept_indices, N):
        N = int(N)
        kept = np.asarray(kept_indices, dtype=np.int64).ravel()
        if N < 1:
            raise ValueError("block length must be positive")
        if kept.size == 0:
            raise ValueError("restriction must keep at least one sample")
        if kept.min() < 0 or kept.max() >= N:
            raise ValueError(f"kept indices must lie in [0, {N - 1}]")
        if np.unique(kept).size != kept.size:
            raise ValueError("kept indices contain duplicates")
        kept = np.sort(kept)
        kept.setflags(write=False)
        super().__init__(kept.size, N)
        self._kept = kept

    @property
    def kept_indices(self):
        return self._kept

    def _forward(self, u):
        return scipy.fft.idct(u, type=2, norm="ortho")[self._kept]

    def columns(self, idx):
        # closed-form DCT-III basis vectors sampled at the kept positions
        idx = np.asarray(idx, dtype=np.float64)
        N = self.cols
        t = (2.0 * self._kept[:, None] + 1.0) * idx[None, :]
        cols = np.sqrt(2.0 / N) * np.cos(np.pi * t / (2.0 * N))
        cols[:, idx == 0] = 1.0 / np.sqrt(N)
        return cols

    def _adjoint(self, v):
        full = np.zeros(self.cols)
        full[self._kept] = v
        return scipy.fft.dct(full, type=2, norm="ortho")


def make_gaussian_matrix(n, N, seed):
    """n x N matrix with i.i.d. N(0, 1/n) entries drawn from PCG64(seed)."""
    if n < 1 or N < 1:
        raise ValueError(f"dimensions must be positive, got n={n}, N={N}")
    if n > N:
        raise ValueError(f"need an underdetermined system (n <= N), got n={n} > N={N}")
    rng = make_rng(seed)
    return DenseOperator(rng.standard_normal((n, N)) / np.sqrt(n))


def make_restricted_synthesis_operator(kept_indices, N):
    return RestrictedDctSynthesis(kept_indices, N)


def adjoint_mismatch(op, probes=20, seed=0):
    """Largest relative gap between <A u, v> and <u, A^T v> over random probes."""
    rng = make_rng(seed)
    worst = 0.0
    for _ in range(probes):
        u = rng.standard_normal(op.cols)
        v = rng.standard_normal(op.rows)
        lhs = float(op.forward(u) @ v)
        rhs = float(u @ op.adjoint(v))
        scale = max(abs(lhs), abs(rhs), np.linalg.norm(op.forward(u)) * np.linalg.norm(v), 1e-300)
        worst = max(worst, abs(lhs - rhs) / scale)
    return worst


# --- plain-text interchange -------------------------------------------------

def save_matrix_csv(path, matrix):
    """Row-major CSV, one matrix row per line, full float64 precision."""
    if isinstance(matrix, LinearOperator):
        matrix = matrix.to_dense()
    np.savetxt(path, np.atleast_2d(matrix), delimiter=",", fmt="%.17g")


def load_matrix_csv(path):
    return DenseOperator(np.loadtxt(path, delimiter=",", ndmin=2, dtype=np.float64))


def save_vector_txt(path, vec):
    np.savetxt(path, np.asarray(vec, dtype=np.float64).ravel(), fmt="%.17g")


def load_vector_txt(path):
    return as_real_vector(np.loadtxt(path, ndmin=1, dtype=np.float64), str(path))
