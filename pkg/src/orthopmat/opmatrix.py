"""Operational matrices of x, d/dx, the primitive and the definite integral.

For a basis ``P = (P_0, P_1, ...)`` each matrix ``L`` satisfies ``l P = P L``:
column ``j`` holds the basis coefficients of ``l P_j``.  Builders return the
top-left ``n x n`` block of the infinite matrix, exactly (no truncation
artefacts in a single matrix).

Two construction routes exist for N and O: the general recursions, which
need nothing but the recurrence coefficients, and closed forms for the
classical families.  Both must agree; the tests hold them to an independent
oracle in :mod:`orthopmat.exactcheck`.
"""
from __future__ import annotations

import enum
import io
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import kernels
from .families import (
    BESSEL, CHEBYSHEV1, CHEBYSHEV2, CHEBYSHEV3, CHEBYSHEV4, GEGENBAUER, HERMITE,
    JACOBI, LAGUERRE, LEGENDRE, Family, eval_basis, recurrence_arrays,
    recurrence_coeffs,
)
from .fields import Field, format_scalar

# relative size below which an off-pattern double is treated as rounding noise
OFF_PATTERN_RTOL = 1e-13

EXPLICIT_KINDS = (
    GEGENBAUER, CHEBYSHEV1, CHEBYSHEV2, CHEBYSHEV3, CHEBYSHEV4,
    LEGENDRE, LAGUERRE, HERMITE, BESSEL,
)


class UnsupportedExplicitError(ValueError):
    """No closed form exists for this family; use the recursive builder."""


class Structure(enum.Enum):
    TRIDIAGONAL = "tridiagonal"
    STRICTLY_UPPER = "strictly-upper-triangular"
    # nonzeros only in rows j-1, j, j+1 of column j; row 0 zero
    SUB_TRIDIAGONAL = "sub-tridiagonal"
    # as SUB_TRIDIAGONAL but row 0 dense
    ROW0_DENSE_SUB_TRIDIAGONAL = "row0-dense-sub-tridiagonal"
    GENERAL = "general"


def pattern_mask(structure: Structure, n: int) -> np.ndarray:
    """Boolean mask of the entries a structure allows to be nonzero."""
    i, j = np.indices((n, n))
    if structure is Structure.TRIDIAGONAL:
        return abs(i - j) <= 1
    if structure is Structure.STRICTLY_UPPER:
        return i < j
    if structure is Structure.SUB_TRIDIAGONAL:
        return (abs(i - j) <= 1) & (i > 0)
    if structure is Structure.ROW0_DENSE_SUB_TRIDIAGONAL:
        return (abs(i - j) <= 1) | (i == 0)
    return np.ones((n, n), dtype=bool)


@dataclass(frozen=True, eq=False)
class OperationalMatrix:
    """An ``n x n`` truncated operator matrix.

    ``valid_cols`` is set on assembled operators: columns ``0..valid_cols``
    coincide with the infinite product; later ones may carry truncation
    shadow.
    """

    entries: np.ndarray
    structure: Structure
    field: Field
    name: str = ""
    valid_cols: int | None = dc_field(default=None)

    def __post_init__(self):
        self.entries.flags.writeable = False

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    def __getitem__(self, idx):
        return self.entries[idx]

    def equals(self, other) -> bool:
        """Entry-wise equality (exact for Fractions)."""
        b = other.entries if isinstance(other, OperationalMatrix) else np.asarray(other)
        return self.entries.shape == b.shape and bool(np.all(self.entries == b))

    def to_csv(self) -> str:
        return matrix_to_csv(self.entries)

    def to_coo(self) -> str:
        return matrix_to_coo(self.entries)


def matrix_to_csv(a) -> str:
    buf = io.StringIO()
    for row in np.asarray(a):
        buf.write(",".join(format_scalar(v) for v in row))
        buf.write("\n")
    return buf.getvalue()


def matrix_to_coo(a) -> str:
    a = np.asarray(a)
    buf = io.StringIO()
    for i, j in zip(*np.nonzero(a != 0)):
        buf.write(f"{i} {j} {format_scalar(a[i, j])}\n")
    return buf.getvalue()


def _wrap(entries, structure, field, name):
    if structure is not Structure.GENERAL:
        assert not np.any(entries[~pattern_mask(structure, entries.shape[0])] != 0)
    return OperationalMatrix(entries, structure, field, name)


def _check_n(n):
    if n < 1:
        raise ValueError("n must be >= 1")


# -- shift matrix -------------------------------------------------------------

def shift_matrix(family: Family, n: int, field: Field = Field.DOUBLE) -> OperationalMatrix:
    """Multiplication by x: column j is ``(gamma_j, beta_j, alpha_j)`` around row j."""
    _check_n(n)
    a, b, g = recurrence_arrays(family, n, field)
    m = field.zeros((n, n))
    for j in range(n):
        m[j, j] = b[j]
        if j + 1 < n:
            m[j + 1, j] = a[j]
        if j > 0:
            m[j - 1, j] = g[j]
    return _wrap(m, Structure.TRIDIAGONAL, field, "M")


# -- differentiation ------------------------------------------------------------

def _eta_recursive(family, n, field, backend="auto"):
    a, b, g = recurrence_arrays(family, n, field)
    return kernels.eta_matrix(a, b, g, n, backend=backend)


def derivative_matrix_recursive(family: Family, n: int, field: Field = Field.DOUBLE,
                                backend: str = "auto") -> OperationalMatrix:
    """N built column by column from the recurrence coefficients alone."""
    _check_n(n)
    eta = _eta_recursive(family, n, field, backend)
    return _wrap(eta, Structure.STRICTLY_UPPER, field, "N")


def _grids(n_rows, n_cols, field):
    i, j = np.indices((n_rows, n_cols))
    return i, j, field.index_grid(i), field.index_grid(j)


def _eta_explicit(family, n, field):
    if family.kind not in EXPLICIT_KINDS:
        raise UnsupportedExplicitError(
            f"no closed-form derivative matrix for {family.label()}; use the recursive builder")
    I, J, fi, fj = _grids(n, n, field)
    sign = field.index_grid(1 - 2 * ((I + J) % 2))   # (-1)^(i+j)
    two = field.one - sign                              # 1 - (-1)^(i+j)
    half = field.ratio(1, 2)
    k = family.kind
    if k == GEGENBAUER:
        eta = two * (fi + field.coerce(family.lam))
    elif k == CHEBYSHEV1:
        eta = two * fj * np.where(I == 0, half, field.one)
    elif k == CHEBYSHEV2:
        eta = two * (fi + 1)
    elif k == CHEBYSHEV3:
        eta = two * (fi + half) + fj - fi
    elif k == CHEBYSHEV4:
        eta = -(two * (fi + half) + fj - fi) * sign
    elif k == LEGENDRE:
        eta = two * (fi + half)
    elif k == LAGUERRE:
        eta = field.zeros((n, n)) - 1
    elif k == HERMITE:
        eta = np.where(I == J - 1, 2 * fj, field.zero)
    else:  # BESSEL
        eta = (fi - fj) * (fi + fj + 1) * (fi + half) * sign
    eta = np.where(I < J, eta, field.zero)
    if field is Field.DOUBLE:
        eta = eta.astype(np.float64)
    return eta


def derivative_matrix_explicit(family: Family, n: int, field: Field = Field.DOUBLE) -> OperationalMatrix:
    """N filled entry by entry from closed forms (classical families except Jacobi)."""
    _check_n(n)
    return _wrap(_eta_explicit(family, n, field), Structure.STRICTLY_UPPER, field, "N")


def derivative_matrix(family: Family, n: int, field: Field = Field.DOUBLE,
                      method: str = "recursive") -> OperationalMatrix:
    if method == "recursive":
        return derivative_matrix_recursive(family, n, field)
    if method == "explicit":
        return derivative_matrix_explicit(family, n, field)
    if method == "auto":
        if family.kind in EXPLICIT_KINDS:
            return derivative_matrix_explicit(family, n, field)
        return derivative_matrix_recursive(family, n, field)
    raise ValueError(f"unknown method {method!r}")


def eta_subdiagonal(family: Family, j: int, m: int, field: Field = Field.EXACT):
    """Closed form of ``eta[j, j+m]`` for ``m`` in 1, 2, 3."""
    if m not in (1, 2, 3):
        raise ValueError("m must be 1, 2 or 3")
    rc = [recurrence_coeffs(family, i, field) for i in range(j + m + 1)]
    A = [r.alpha for r in rc]
    B = [r.beta for r in rc]
    G = [r.gamma for r in rc]
    if family.kind == JACOBI:
        al, be = field.coerce(family.alpha), field.coerce(family.beta)
        s = al + be
        if m == 1 and (j > 0 or s != -1):
            return (2 * j + s + 1) * (2 * j + s + 2) / (2 * (j + s + 1))
        if m == 2:
            # written for eta[J-1, J+1] with J = j+1
            J = j + 1
            return ((2 * J + s) ** 2 - 1) / (2 * (J + s) * (J + s + 1)) * (be - al)
    if m == 1:
        return (j + 1) / A[j]
    if m == 2:
        total = sum((B[i] - B[j + 1] for i in range(j + 1)), field.zero)
        return total / (A[j] * A[j + 1])
    total = sum(((B[i] - B[j + 2]) * (B[i] - B[j + 1]) + 2 * A[i] * G[i + 1]
                 - A[j + 1] * G[j + 2] for i in range(j + 1)), field.zero)
    return total / (A[j] * A[j + 1] * A[j + 2])


# -- primitive ----------------------------------------------------------------------

def _theta_recursive(family, n, field, backend="auto"):
    """Rows 0..n of the first n columns of O (row n feeds the definite integral)."""
    a, b, g = recurrence_arrays(family, n + 1, field)
    eta = kernels.eta_matrix(a, b, g, n + 1, backend=backend)
    return kernels.theta_matrix(a, eta, n, backend=backend)


def _sub_tridiagonal_or_general(theta, field):
    """Tag the recursive O, clearing rounding noise only when it is noise."""
    rows, cols = theta.shape
    i, j = np.indices((rows, cols))
    off = ~((abs(i - j) <= 1) & (i > 0))
    if field is Field.EXACT:
        ok = not np.any(theta[off] != 0)
    else:
        colmax = np.max(np.abs(theta), axis=0)
        ok = bool(np.all(~off | (np.abs(theta) <= OFF_PATTERN_RTOL * colmax)))
        if ok:
            theta = np.where(off, 0.0, theta)
    return theta, (Structure.SUB_TRIDIAGONAL if ok else Structure.GENERAL)


def _theta_explicit(family, n, field):
    if family.kind not in EXPLICIT_KINDS:
        raise UnsupportedExplicitError(
            f"no closed-form primitive matrix for {family.label()}; use the recursive builder")
    a, b, _ = recurrence_arrays(family, max(n, 2), field)
    th = field.zeros((n + 1, n))
    one = field.one
    th[1, 0] = a[0]
    if n > 1:
        th[2, 1] = a[1] / 2
        th[1, 1] = (b[1] - b[0]) / 2
    k = family.kind
    lam = field.coerce(family.lam) if k == GEGENBAUER else None

    def vs(m):  # varsigma_m = delta_m - 1
        return 0 if m == 0 else -1

    for j in range(2, n):
        J = field.coerce(j)
        if k == GEGENBAUER:
            th[j + 1, j] = one / (2 * J + 2 * lam)
            th[j - 1, j] = -one / (2 * J + 2 * lam)
        elif k == CHEBYSHEV1:
            th[j + 1, j] = one / (2 * (J + 1))
            th[j - 1, j] = -one / (2 * (J - 1))
        elif k == CHEBYSHEV2:
            th[j + 1, j] = one / (2 * J + 2)
            th[j - 1, j] = -one / (2 * J + 2)
        elif k == CHEBYSHEV3:
            for i in (j - 1, j, j + 1):
                th[i, j] = one / 2 * (J + 1) ** vs(j - 1 - i) * (-J) ** vs(j + 1 - i)
        elif k == CHEBYSHEV4:
            for i in (j - 1, j, j + 1):
                th[i, j] = -one / 2 * (-J - 1) ** vs(j - 1 - i) * J ** vs(j + 1 - i)
        elif k == LEGENDRE:
            th[j + 1, j] = one / (2 * J + 1)
            th[j - 1, j] = -one / (2 * J + 1)
        elif k == LAGUERRE:
            th[j, j] = one
            th[j + 1, j] = -one
        elif k == HERMITE:
            th[j + 1, j] = one / (2 * J + 2)
        else:  # BESSEL
            for i in (j - 1, j, j + 1):
                th[i, j] = ((J + 1) ** vs(j - 1 - i) * (2 * J + 1) ** vs(j - i)
                            * J ** vs(j + 1 - i))
    return th


def primitive_matrix_recursive(family: Family, n: int, field: Field = Field.DOUBLE,
                               backend: str = "auto") -> OperationalMatrix:
    """O by back substitution; no band structure is assumed.

    The result is tagged SUB_TRIDIAGONAL only if every entry outside rows
    j-1..j+1 came out zero (or below ``OFF_PATTERN_RTOL`` times the column
    maximum in doubles); otherwise GENERAL.
    """
    _check_n(n)
    theta, structure = _sub_tridiagonal_or_general(_theta_recursive(family, n, field, backend), field)
    return _wrap(theta[:n].copy(), structure, field, "O")


def primitive_matrix_explicit(family: Family, n: int, field: Field = Field.DOUBLE) -> OperationalMatrix:
    _check_n(n)
    return _wrap(_theta_explicit(family, n, field)[:n].copy(), Structure.SUB_TRIDIAGONAL, field, "O")


def _theta_extended(family, n, field, method):
    if method == "auto":
        method = "explicit" if family.kind in EXPLICIT_KINDS else "recursive"
    if method == "explicit":
        return _theta_explicit(family, n, field), Structure.SUB_TRIDIAGONAL
    if method == "recursive":
        return _sub_tridiagonal_or_general(_theta_recursive(family, n, field), field)
    raise ValueError(f"unknown method {method!r}")


def primitive_matrix(family: Family, n: int, field: Field = Field.DOUBLE,
                     method: str = "recursive") -> OperationalMatrix:
    _check_n(n)
    theta, structure = _theta_extended(family, n, field, method)
    return _wrap(theta[:n].copy(), structure, field, "O")


def theta_subdiagonal(family: Family, j: int, field: Field = Field.EXACT):
    """``theta[j+1, j]``."""
    if family.kind == JACOBI:
        return 1 / eta_subdiagonal(family, j, 1, field)
    return recurrence_coeffs(family, j, field).alpha / (j + 1)


def _means(family, j, field):
    rc = [recurrence_coeffs(family, i, field) for i in range(j + 2)]
    mean_b = sum((r.beta for r in rc[:j]), field.zero) / j
    mean_b2 = sum((r.beta ** 2 for r in rc[:j]), field.zero) / j
    mean_ag = sum((rc[i].alpha * rc[i + 1].gamma for i in range(j)), field.zero) / j
    return rc, mean_b, mean_b2, mean_ag


def theta_diagonal(family: Family, j: int, field: Field = Field.EXACT):
    """``theta[j, j]`` for ``j >= 1``: (beta_j - mean(beta_0..beta_{j-1})) / (j+1)."""
    if j < 1:
        raise ValueError("j must be >= 1")
    if family.kind == JACOBI:
        al, be = field.coerce(family.alpha), field.coerce(family.beta)
        s = al + be
        return 2 * (al - be) / ((2 * j + s) * (2 * j + s + 2))
    rc, mean_b, _, _ = _means(family, j, field)
    return (rc[j].beta - mean_b) / (j + 1)


def theta_superdiagonal(family: Family, j: int, field: Field = Field.EXACT):
    """``theta[j, j+1]`` for ``j >= 1`` (row j of column j+1).

    With m_j, s_j, x_j the means over i < j of beta_i, beta_i**2 and
    alpha_i gamma_{i+1}::

        (j+2) alpha_j theta[j, j+1] = alpha_j gamma_{j+1} - s_j - 2 x_j
                                      + m_j m_{j+1} + beta_j (m_j - beta_j)/(j+1)
    """
    if j < 1:
        raise ValueError("j must be >= 1")
    rc, mb, mb2, mag = _means(family, j, field)
    mb_next = (j * mb + rc[j].beta) / (j + 1)
    a_j, b_j = rc[j].alpha, rc[j].beta
    num = a_j * rc[j + 1].gamma - mb2 - 2 * mag + mb * mb_next + b_j * (mb - b_j) / (j + 1)
    return num / ((j + 2) * a_j)


# -- definite integral ---------------------------------------------------------------

# lower limit for which endpoint_row has closed forms
ENDPOINTS = {
    GEGENBAUER: -1, CHEBYSHEV1: -1, CHEBYSHEV2: -1, CHEBYSHEV3: -1,
    CHEBYSHEV4: -1, LEGENDRE: -1, LAGUERRE: 0,
}


def endpoint_row(family: Family, n: int, field: Field = Field.DOUBLE):
    """Row 0 of O_a^x in closed form for ``a = ENDPOINTS[family.kind]``.

    Entry j is the P_0 coefficient of the integral of P_j from a to x.
    """
    k = family.kind
    if k not in ENDPOINTS:
        raise UnsupportedExplicitError(f"no closed-form endpoint row for {family.label()}")
    r = field.ratio
    row = field.zeros(n)
    if k == GEGENBAUER:
        lam = field.coerce(family.lam)
        first = (field.one, -lam * (2 * lam + 1) / (2 * lam + 2))
    else:
        first = {
            CHEBYSHEV1: (r(1), r(-1, 4)), CHEBYSHEV2: (r(1), r(-3, 4)),
            CHEBYSHEV3: (r(3, 2), r(-2)), CHEBYSHEV4: (r(1, 2), r(0)),
            LEGENDRE: (r(1), r(-1, 3)), LAGUERRE: (r(1), r(0)),
        }[k]
    row[0] = first[0]
    if n > 1:
        row[1] = first[1]
    binom = field.one  # binom(j + 2 lam - 2, j), advanced in the loop
    for j in range(2, n):
        sgn = 1 if j % 2 == 0 else -1
        if k == GEGENBAUER:
            if j == 2:
                binom = (2 * lam - 1) * (2 * lam) / 2
            else:
                binom = binom * (j + 2 * lam - 2) / j
            row[j] = sgn * binom / (j + 1)
        elif k == CHEBYSHEV1:
            row[j] = r(-sgn, j * j - 1)
        elif k == CHEBYSHEV2:
            row[j] = r(sgn, j + 1)
        elif k == CHEBYSHEV3:
            row[j] = r(sgn * (2 * j + 1), j * (j + 1))
        elif k == CHEBYSHEV4:
            row[j] = r(-sgn, j * (j + 1))
    return row


def definite_integral_matrix(family: Family, n: int, a, field: Field = Field.DOUBLE,
                             method: str = "recursive", fast_path: bool = True) -> OperationalMatrix:
    """O_a^x: O with row 0 chosen so every column's primitive vanishes at ``a``.

    Row 0 is ``-sum_{i>=1} theta[i, j] P_i(a)``; when ``a`` is the family's
    standard endpoint and ``fast_path`` is set, the closed forms of
    :func:`endpoint_row` are used instead.
    """
    _check_n(n)
    a = field.coerce(a)
    theta, structure = _theta_extended(family, n, field, method)
    if fast_path and family.kind in ENDPOINTS and a == ENDPOINTS[family.kind]:
        row0 = endpoint_row(family, n, field)
    else:
        p = eval_basis(family, n + 1, a, field)
        row0 = -(p[1:] @ theta[1:])
    out = theta[:n].copy()
    out[0] = row0
    structure = (Structure.ROW0_DENSE_SUB_TRIDIAGONAL
                 if structure is Structure.SUB_TRIDIAGONAL else Structure.GENERAL)
    return _wrap(out, structure, field, "Oax")
