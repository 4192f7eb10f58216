"""Numba dispatch.

Set ``WAVEBASIS_DISABLE_NUMBA=1`` to force the pure-numpy kernels.
"""
import os

_disabled = os.environ.get("WAVEBASIS_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    import numba

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAS_NUMBA = False

USE_NUMBA = HAS_NUMBA and not _disabled


def njit(*args, **kwargs):
    """``numba.njit`` when available, otherwise the undecorated function."""
    if not HAS_NUMBA:
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda fn: fn
    kwargs.setdefault("cache", True)
    return numba.njit(*args, **kwargs)
