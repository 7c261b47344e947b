"""Numba switch.

Set ``POSEFORMAT_DISABLE_NUMBA=1`` to force the pure-numpy kernels. The
flag is read once at import time.
"""
import os

_FLAG = os.environ.get("POSEFORMAT_DISABLE_NUMBA", "").strip().lower()
DISABLED_BY_ENV = _FLAG not in ("", "0", "false", "no")

try:
    from numba import njit
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f

USE_NUMBA = HAVE_NUMBA and not DISABLED_BY_ENV


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"
