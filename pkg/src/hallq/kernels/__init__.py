"""Hot counting kernels with two interchangeable backends.

The numba backend jit-compiles the inner loops (matrix products over the
field, row reduction, orbit breadth-first closure, fiber scans); the
numpy backend is a pure-vectorized fallback with identical semantics.
Selection: environment variable HALLQ_BACKEND = "numba" | "numpy",
defaulting to numba when it imports, numpy otherwise.  Both backends are
importable side by side (see benchmarks/compare_backends.py).
"""

from __future__ import annotations

import os


def load_backend(name: str):
    if name == "numba":
        from hallq.kernels import numba_backend

        return numba_backend
    if name == "numpy":
        from hallq.kernels import numpy_backend

        return numpy_backend
    raise ValueError(f"unknown backend {name!r} (expected 'numba' or 'numpy')")


def default_backend_name() -> str:
    env = os.environ.get("HALLQ_BACKEND", "").strip().lower()
    if env:
        return env
    try:
        import numba  # noqa: F401

        return "numba"
    except ImportError:
        return "numpy"


_active = None


def active_backend():
    global _active
    if _active is None:
        _active = load_backend(default_backend_name())
    return _active


def backend_name() -> str:
    return active_backend().NAME
