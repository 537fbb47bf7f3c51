"""Kernel dispatch: compiled double-precision kernels when available.

The compiled module is used for float64 inputs unless the environment
variable ``ORTHOPMAT_PURE_PYTHON`` is set to a non-empty value.  Object
(exact) arrays always go through the pure-Python kernels.
"""
from __future__ import annotations

import os

import numpy as np

from . import _kernels_py

try:
    if os.environ.get("ORTHOPMAT_PURE_PYTHON"):
        raise ImportError("pure-python kernels forced")
    from . import _kernels as _ext
except ImportError:
    _ext = None

HAVE_EXTENSION = _ext is not None


def _use_ext(arr, backend):
    if backend == "python":
        return False
    if backend == "ext":
        if _ext is None:
            raise RuntimeError("compiled kernels are not available")
        return True
    return _ext is not None and arr.dtype == np.float64


def eta_matrix(a, b, g, n, backend="auto"):
    if _use_ext(a, backend):
        return _ext.eta_matrix(np.ascontiguousarray(a, dtype=np.float64),
                               np.ascontiguousarray(b, dtype=np.float64),
                               np.ascontiguousarray(g, dtype=np.float64), n)
    return _kernels_py.eta_matrix(a, b, g, n)


def theta_matrix(a, eta, n, backend="auto"):
    if _use_ext(a, backend):
        return _ext.theta_matrix(np.ascontiguousarray(a, dtype=np.float64),
                                 np.asarray(eta, dtype=np.float64), n)
    return _kernels_py.theta_matrix(a, eta, n)
