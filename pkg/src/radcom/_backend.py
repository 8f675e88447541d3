"""Kernel backend selection.

The environment variable RADCOM_BACKEND picks the implementation of the hot
kernels:

    RADCOM_BACKEND=numba   force the numba-compiled kernels (error if absent)
    RADCOM_BACKEND=numpy   force the pure-numpy fallback
    unset / auto           numba when importable, numpy otherwise

Both implementations agree to rounding error; `benchmarks/bench_kernels.py`
compares their throughput.
"""

import os
import warnings

from . import _kernels_numpy

_ENV_VAR = "RADCOM_BACKEND"


def _load(choice):
    if choice == "numpy":
        return _kernels_numpy, "numpy"
    if choice == "numba":
        from . import _kernels_numba
        return _kernels_numba, "numba"
    if choice == "auto":
        try:
            from . import _kernels_numba
            return _kernels_numba, "numba"
        except ImportError:
            warnings.warn("numba unavailable; falling back to numpy kernels")
            return _kernels_numpy, "numpy"
    raise ValueError(
        f"{_ENV_VAR} must be 'numba', 'numpy' or 'auto', got {choice!r}")


_choice = os.environ.get(_ENV_VAR, "auto").strip().lower()
_impl, BACKEND_NAME = _load(_choice)

psi_matrix = _impl.psi_matrix
psi_derivative_matrices = _impl.psi_derivative_matrices


def backend_name():
    """Name of the active kernel backend ('numba' or 'numpy')."""
    return BACKEND_NAME
