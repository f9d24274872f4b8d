"""Backend selection for the hot kernels.

Every kernel exists twice: a scalar loop compiled with numba and a
vectorised numpy version.  ``KTUPLE_BACKEND=numpy`` forces the numpy path
(also used automatically when numba is not importable).
"""

import os

try:
    from numba import njit
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]

        def wrap(fn):
            return fn
        return wrap

BACKENDS = ("numba", "numpy")

_backend = None


def _initial_backend():
    choice = os.environ.get("KTUPLE_BACKEND", "").strip().lower()
    if choice == "numpy" or not HAVE_NUMBA:
        return "numpy"
    if choice in ("", "numba"):
        return "numba"
    raise ValueError(f"KTUPLE_BACKEND must be one of {BACKENDS}, got {choice!r}")


def get_backend():
    global _backend
    if _backend is None:
        _backend = _initial_backend()
    return _backend


def set_backend(name):
    """Switch the process-wide kernel backend; returns the previous one."""
    global _backend
    if name not in BACKENDS:
        raise ValueError(f"unknown backend {name!r}; expected one of {BACKENDS}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    previous = get_backend()
    _backend = name
    return previous


def use_numba():
    return get_backend() == "numba"
