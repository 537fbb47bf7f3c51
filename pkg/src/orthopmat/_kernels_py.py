"""Field-generic kernels for the derivative and primitive recursions.

These run on float64 arrays as well as object arrays of Fractions.  The
compiled module ``_kernels`` implements the same two functions for float64
only.

Derivative matrix, column ``j+1`` from columns ``j`` and ``j-1``::

    alpha_j eta[i, j+1] = alpha_{i-1} eta[i-1, j] + (beta_i - beta_j) eta[i, j]
                          + gamma_{i+1} eta[i+1, j] - gamma_j eta[i, j-1] + [i == j]

for ``i = 0..j``, seeded by ``eta[0, 1] = 1/alpha_0``.  The ``[i == j]`` term
comes from differentiating ``x P_j``.

Primitive matrix, column ``j`` by back substitution in ``N O = I``::

    theta[j+1, j] = alpha_j / (j+1)
    theta[i+1, j] = -alpha_i/(i+1) * sum_{k=i+2}^{j+1} eta[i, k] theta[k, j],   i = j-1..0
"""
from __future__ import annotations

import numpy as np


def _zeros_like_field(shape, sample):
    if sample.dtype == object:
        out = np.empty(shape, dtype=object)
        out.fill(sample[0] * 0)
        return out
    return np.zeros(shape)


def eta_matrix(a, b, g, n):
    eta = _zeros_like_field((n, n), a)
    if n > 1:
        eta[0, 1] = 1 / a[0] if a.dtype != object else a[0] ** -1
    for j in range(1, n - 1):
        i = np.arange(j + 1)
        s = _zeros_like_field(j + 1, a)
        s[1:] = a[:j] * eta[:j, j]
        s = s + (b[: j + 1] - b[j]) * eta[: j + 1, j]
        s = s + g[1 : j + 2] * eta[1 : j + 2, j]
        s = s - g[j] * eta[: j + 1, j - 1]
        s[j] = s[j] + 1
        eta[i, j + 1] = s / a[j]
    return eta


def theta_matrix(a, eta, n):
    th = _zeros_like_field((n + 1, n), a)
    for j in range(n):
        th[j + 1, j] = a[j] / (j + 1)
        for i in range(j - 1, -1, -1):
            s = np.dot(eta[i, i + 2 : j + 2], th[i + 2 : j + 2, j])
            th[i + 1, j] = -(a[i] / (i + 1)) * s
    return th
