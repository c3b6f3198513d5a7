"""Numba switch for the hot kernels.

Every kernel in :mod:`multiwl1.kernels` exists twice: a vectorized numpy
version and a loop version compiled with ``numba.njit``. The numba path is
used when numba imports and ``MULTIWL1_DISABLE_NUMBA`` is unset (or falsy).
The flag is read once, at import time.
"""
import os

_FLAG = os.environ.get("MULTIWL1_DISABLE_NUMBA", "").strip().lower()
_DISABLED = _FLAG in ("1", "true", "yes", "on")

try:
    if _DISABLED:
        raise ImportError("numba disabled by MULTIWL1_DISABLE_NUMBA")
    import numba
except ImportError:
    numba = None

USE_NUMBA = numba is not None


def njit(func):
    """``numba.njit(cache=True)`` when available, identity otherwise."""
    if numba is None:
        return func
    return numba.njit(cache=True)(func)
