# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled double-precision kernels for the derivative and primitive recursions.

Mirrors :mod:`orthopmat._kernels_py`; see there for the recurrences.
"""
import numpy as np


def eta_matrix(const double[::1] a, const double[::1] b, const double[::1] g, Py_ssize_t n):
    out = np.zeros((n, n), order="F")
    cdef double[::1, :] eta = out
    cdef Py_ssize_t i, j
    cdef double s
    if n > 1:
        eta[0, 1] = 1.0 / a[0]
    for j in range(1, n - 1):
        for i in range(j + 1):
            s = 0.0
            if i > 0:
                s = a[i - 1] * eta[i - 1, j]
            s = s + (b[i] - b[j]) * eta[i, j]
            s = s + g[i + 1] * eta[i + 1, j]
            s = s - g[j] * eta[i, j - 1]
            if i == j:
                s = s + 1.0
            eta[i, j + 1] = s / a[j]
    return out


def theta_matrix(const double[::1] a, const double[:, :] eta, Py_ssize_t n):
    out = np.zeros((n + 1, n), order="F")
    cdef double[::1, :] th = out
    cdef Py_ssize_t i, j, k
    cdef double s
    for j in range(n):
        th[j + 1, j] = a[j] / (j + 1)
        for i in range(j - 1, -1, -1):
            s = 0.0
            for k in range(i + 2, j + 2):
                s = s + eta[i, k] * th[k, j]
            th[i + 1, j] = -(a[i] / (i + 1)) * s
    return out
