"""Optional numba acceleration.

Set ``MULTIPLICITY_NO_NUMBA=1`` in the environment to force the pure-numpy
paths (also used automatically when numba is not importable).
"""
import os

try:
    from numba import njit as _njit
    NUMBA_INSTALLED = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    NUMBA_INSTALLED = False

USE_NUMBA = NUMBA_INSTALLED and os.environ.get("MULTIPLICITY_NO_NUMBA", "") not in ("1", "true", "yes")


def optional_njit(*args, **kwargs):
    """``numba.njit`` when available, identity otherwise.

    The undecorated function stays reachable as ``.py_func`` in both cases so
    benchmarks can compare the two paths from one process.
    """
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return optional_njit()(args[0])

    def decorator(func):
        if NUMBA_INSTALLED:
            return _njit(*args, **kwargs)(func)
        func.py_func = func
        return func
    return decorator
