"""Numba switch.

Set ``BICOMPLEX_LAPLACE_DISABLE_NUMBA=1`` to force the pure-numpy kernels.
The numpy path is also used automatically when numba is not importable.
"""

import logging
import os

_FLAG = "BICOMPLEX_LAPLACE_DISABLE_NUMBA"


def _disabled_by_env():
    return os.environ.get(_FLAG, "").strip().lower() in {"1", "true", "yes", "on"}


try:
    import numba

    logging.getLogger("numba").setLevel(logging.WARNING)
    NUMBA_INSTALLED = True
except ImportError:  # pragma: no cover - numba is present in the dev env
    numba = None
    NUMBA_INSTALLED = False

USE_NUMBA = NUMBA_INSTALLED and not _disabled_by_env()


def njit(func):
    """Compile ``func`` in nopython mode, or return it untouched without numba."""
    if not NUMBA_INSTALLED:
        return func
    return numba.njit(cache=True, nogil=True)(func)
