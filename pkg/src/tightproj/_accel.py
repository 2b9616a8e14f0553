"""Backend selection for the hot kernels.

Set ``TIGHTPROJ_NUMBA=0`` before import to force the pure-numpy path. If
numba is not importable the numpy path is used regardless.
"""
import os

_FLAG = os.environ.get("TIGHTPROJ_NUMBA", "1").strip().lower()

try:
    import numba
    HAS_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAS_NUMBA = False

USE_NUMBA = HAS_NUMBA and _FLAG not in ("0", "false", "no", "off")


def njit(func):
    """``numba.njit(cache=True)`` when numba is available, identity otherwise."""
    if not HAS_NUMBA:
        return func
    return numba.njit(cache=True)(func)


def default_backend():
    return "numba" if USE_NUMBA else "numpy"
