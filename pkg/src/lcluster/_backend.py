"""Kernel backend selection.

The numba path is the default. Setting ``LCLUSTER_NO_NUMBA=1`` in the
environment (or running without numba installed) selects the pure-numpy
fallback. Tests and benchmarks switch at runtime with :func:`use_backend`.
"""
import os
from contextlib import contextmanager

ENV_FLAG = "LCLUSTER_NO_NUMBA"
BACKENDS = ("numba", "numpy")

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAVE_NUMBA = False


def _from_env():
    if not HAVE_NUMBA:
        return "numpy"
    flag = os.environ.get(ENV_FLAG, "").strip().lower()
    return "numpy" if flag not in ("", "0", "false", "no") else "numba"


_active = _from_env()


def active():
    return _active


def set_backend(name):
    global _active
    if name not in BACKENDS:
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    _active = name


@contextmanager
def use_backend(name):
    prev = _active
    set_backend(name)
    try:
        yield
    finally:
        set_backend(prev)


def njit(func=None, **kwargs):
    """``numba.njit(cache=True)`` when numba is importable, identity otherwise."""
    kwargs.setdefault("cache", True)

    def wrap(f):
        if not HAVE_NUMBA:
            return f
        return numba.njit(**kwargs)(f)

    if func is not None:
        return wrap(func)
    return wrap
