"""Numba switch.

Kernels are written once as plain loops and decorated with :func:`njit`.
Set ``FPA_DISABLE_NUMBA=1`` to skip compilation; dispatchers in
:mod:`fpa.kernels` then route to the vectorised numpy implementations.
"""

import os

_DISABLED = os.environ.get("FPA_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes")

try:
    if _DISABLED:
        raise ImportError
    import numba

    HAS_NUMBA = True
except ImportError:
    numba = None
    HAS_NUMBA = False


def njit(*args, **kwargs):
    """``numba.njit`` when available, otherwise the identity decorator."""
    if HAS_NUMBA:
        return numba.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda fn: fn
