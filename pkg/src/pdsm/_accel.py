"""Backend selection for the numeric kernels.

``PDSM_BACKEND=numpy`` forces the pure-numpy path; the default uses numba
when it imports cleanly.
"""
import os

try:
    import numba

    HAS_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAS_NUMBA = False

BACKENDS = ("numba", "numpy")


def default_backend():
    name = os.environ.get("PDSM_BACKEND", "numba").strip().lower()
    if name not in BACKENDS:
        raise ValueError(f"PDSM_BACKEND must be one of {BACKENDS}, got {name!r}")
    if name == "numba" and not HAS_NUMBA:
        return "numpy"
    return name


def resolve(backend=None):
    if backend is None:
        return default_backend()
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "numba" and not HAS_NUMBA:
        return "numpy"
    return backend


def njit(*args, **kwargs):
    """``numba.njit`` when available, identity decorator otherwise."""
    if HAS_NUMBA:
        return numba.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda fn: fn
