"""Backend selection for the hot numeric kernels.

Two interchangeable implementations exist: numba-compiled loops
(:mod:`._kernels_numba`) and vectorized pure numpy (:mod:`._kernels_numpy`).
The environment variable ``DOMINANCE_LAB_BACKEND`` picks one:

* ``numba``  - always use the compiled kernels (import error if numba is absent)
* ``numpy``  - always use the pure numpy path
* unset     - numba when importable, numpy otherwise

Both paths produce bit-identical results on the same inputs; the numba one
is typically 2-10x faster on bootstrap and simulation workloads (see
``benchmarks/bench_kernels.py``).
"""
from __future__ import annotations

import os
import warnings

from .errors import DomainError

ENV_BACKEND = "DOMINANCE_LAB_BACKEND"

_VALID = ("numba", "numpy")


def _numba_module():
    from . import _kernels_numba

    return _kernels_numba


def _numpy_module():
    from . import _kernels_numpy

    return _kernels_numpy


def active_backend() -> str:
    """Resolve the backend name currently in effect."""
    choice = os.environ.get(ENV_BACKEND, "").strip().lower()
    if choice and choice not in _VALID:
        raise DomainError(
            f"{ENV_BACKEND} must be one of {_VALID}, got {choice!r}"
        )
    if choice == "numpy":
        return "numpy"
    if choice == "numba":
        _numba_module()  # fail loudly if requested but unavailable
        return "numba"
    try:
        _numba_module()
    except ImportError:  # pragma: no cover - depends on the environment
        warnings.warn("numba unavailable, falling back to the numpy kernels")
        return "numpy"
    return "numba"


def kernels():
    """Return the kernel module for the active backend."""
    if active_backend() == "numba":
        return _numba_module()
    return _numpy_module()
