"""JIT switch for the hot kernels.

Kernels are written once as plain Python over numpy arrays and compiled with
numba when it is importable and ``RLABEL_DISABLE_NUMBA`` is unset (or "0").
With the flag set, the uncompiled functions run as-is; counting kernels that
have a vectorized numpy form dispatch to it instead.
"""

from __future__ import annotations

import os

_FLAG = "RLABEL_DISABLE_NUMBA"


def _numba_requested() -> bool:
    return os.environ.get(_FLAG, "0").strip().lower() in ("", "0", "false", "no")


try:
    if not _numba_requested():
        raise ImportError("numba disabled by " + _FLAG)
    import numba as _numba
except ImportError:
    _numba = None

USE_NUMBA = _numba is not None


def jit(func):
    """``numba.njit(cache=True, nogil=True)`` or the identity."""
    if _numba is None:
        func.py_func = func
        return func
    return _numba.njit(cache=True, nogil=True)(func)


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"
