"""Residual experiments that stress the operational matrices.

* ``diffeq``: the classical second-order ODE of each family,
  ``g2(M) N^2 + g1(M) N + diag(a_j)``, must vanish.
* ``moments``: ``(P(1) - P(0)) O M^k`` must reproduce the Legendre moments
  ``int_0^1 x^k P_j(x) dx``.
* ``genfun``: coefficient vectors of generating functions must be
  annihilated by operators derived from their differential/integral
  identities.

Residuals are reported twice: restricted to the rows/columns unaffected by
truncation, and over the whole truncated matrix.
"""
from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

import numpy as np

from .families import (
    CHEBYSHEV1, CHEBYSHEV2, GEGENBAUER, HERMITE, JACOBI, LAGUERRE, LEGENDRE,
    LEGENDRE_P, Family, legendre_zero_column,
)
from .fields import Field, format_scalar
from .operators import DifferentialOperatorSpec, assemble_differential
from .opmatrix import derivative_matrix, primitive_matrix, shift_matrix


class UnsupportedFamilyError(ValueError):
    pass


# -- differential equations -----------------------------------------------------------

@dataclass(frozen=True)
class DiffEqData:
    """``g2(x) y'' + g1(x) y' + a_n y = 0`` is solved by ``P_n``."""

    g2: tuple
    g1: tuple
    a_of: Callable


def diffeq_data(family: Family, field: Field = Field.DOUBLE) -> DiffEqData:
    c = field.coerce
    one_minus_x2 = (c(1), c(0), c(-1))
    k = family.kind
    if k == JACOBI:
        al, be = c(family.alpha), c(family.beta)
        return DiffEqData(one_minus_x2, (be - al, -(al + be + 2)), lambda n: n * (n + al + be + 1))
    if k == GEGENBAUER:
        lam = c(family.lam)
        return DiffEqData(one_minus_x2, (c(0), -(2 * lam + 1)), lambda n: n * (n + 2 * lam))
    if k == CHEBYSHEV1:
        return DiffEqData(one_minus_x2, (c(0), c(-1)), lambda n: c(n * n))
    if k == CHEBYSHEV2:
        return DiffEqData(one_minus_x2, (c(0), c(-3)), lambda n: c(n * (n + 2)))
    if k == LEGENDRE:
        return DiffEqData(one_minus_x2, (c(0), c(-2)), lambda n: c(n * (n + 1)))
    if k == LAGUERRE:
        return DiffEqData((c(0), c(1)), (c(1), c(-1)), lambda n: c(n))
    if k == HERMITE:
        return DiffEqData((c(1),), (c(0), c(-2)), lambda n: c(2 * n))
    raise UnsupportedFamilyError(f"no differential equation data for {family.label()}")


def diffeq_matrix(family: Family, n: int, field: Field = Field.DOUBLE, method: str = "auto"):
    """``T = g2(M) N^2 + g1(M) N + D`` and its valid column bound."""
    data = diffeq_data(family, field)
    spec = DifferentialOperatorSpec(((2, data.g2), (1, data.g1)))
    pi = assemble_differential(spec, family, n, field, method)
    t = np.array(pi.entries)
    for j in range(n):
        t[j, j] = t[j, j] + data.a_of(j)
    return t, pi.valid_cols


def _max_abs(a):
    if a.size == 0:
        return 0.0
    return max(abs(v) for v in a.ravel()) if a.dtype == object else float(np.max(np.abs(a)))


def diffeq_residuals(family: Family, n: int, field: Field = Field.DOUBLE, method: str = "auto"):
    """``(max|T| on the valid block, max|T| over all columns)``."""
    t, jmax = diffeq_matrix(family, n, field, method)
    return _max_abs(t[:, : jmax + 1]), _max_abs(t)


def diffeq_residual(family: Family, n: int, field: Field = Field.DOUBLE, method: str = "auto"):
    return diffeq_residuals(family, n, field, method)[0]


# -- Legendre moments ------------------------------------------------------------------

def _nonpositive_int(x: float) -> int | None:
    if x <= 0 and x == math.floor(x):
        return int(-x)
    return None


def gamma_ratio(a: float, b: float) -> tuple[int, float]:
    """``Gamma(a)/Gamma(b)`` as ``(sign, log|.|)``, with poles handled.

    A pole only in the denominator gives sign 0 (the ratio is exactly zero);
    poles in both give the finite limit ``(-1)^(p-q) q!/p!`` for
    ``a = -p``, ``b = -q``.
    """
    pa, pb = _nonpositive_int(a), _nonpositive_int(b)
    if pa is not None and pb is not None:
        sign = -1 if (pa - pb) % 2 else 1
        return sign, math.lgamma(pb + 1) - math.lgamma(pa + 1)
    if pb is not None:
        return 0, -math.inf
    if pa is not None:
        raise ZeroDivisionError(f"Gamma({a}) is a pole")

    def sgn(x):
        return 1 if x > 0 else (-1 if math.ceil(-x) % 2 else 1)

    return sgn(a) * sgn(b), math.lgamma(a) - math.lgamma(b)


def legendre_moments(k: float, n: int) -> np.ndarray:
    """``I_j = int_0^1 x^k P_j(x) dx`` for ``j < n`` from Gamma-function ratios."""
    if k <= -1:
        raise ValueError("k must be > -1")
    out = np.zeros(n)
    for j in range(n):
        m = j // 2
        if j % 2 == 0:
            s1, l1 = gamma_ratio((2 * m - k) / 2, -k / 2)
            s2, l2 = gamma_ratio((1 + k) / 2, (2 * m + 3 + k) / 2)
        else:
            s1, l1 = gamma_ratio((2 * m + 1 - k) / 2, (1 - k) / 2)
            s2, l2 = gamma_ratio((2 + k) / 2, (2 * m + 4 + k) / 2)
        sign = s1 * s2 * (-1 if m % 2 else 1)
        out[j] = 0.0 if sign == 0 else sign * 0.5 * math.exp(l1 + l2)
    return out


def legendre_moment_vector(k: int, n: int, field: Field = Field.DOUBLE, method: str = "auto"):
    """``(P(1) - P(0)) O M^k`` with n-truncated Legendre matrices.

    Column j of ``O M^k`` holds a primitive of ``x^k P_j``, so evaluating it
    at 1 and 0 gives the moment.  The row vector is pushed through M one
    factor at a time instead of forming ``M^k``.
    """
    if k < 0 or int(k) != k:
        raise ValueError("k must be a nonnegative integer")
    M = shift_matrix(LEGENDRE_P, n, field).entries
    O = primitive_matrix(LEGENDRE_P, n, field, method).entries
    v = (field.array([1] * n) - legendre_zero_column(n, field)) @ O
    for _ in range(int(k)):
        v = v @ M
    return v


def moment_valid_count(k: int, n: int) -> int:
    """Number of leading entries of the moment vector free of truncation shadow."""
    return max(n - max(int(k) + 2, 4), 0)


def legendre_moment_errors(k: int, n: int, method: str = "auto"):
    """``(||T_n - I_n||_2`` on the valid entries, same over all n entries)."""
    t = legendre_moment_vector(k, n, Field.DOUBLE, method)
    d = t - legendre_moments(k, n)
    m = moment_valid_count(k, n)
    return float(np.linalg.norm(d[:m])), float(np.linalg.norm(d))


def legendre_moment_error(k: int, n: int, method: str = "auto") -> float:
    return legendre_moment_errors(k, n, method)[0]


# -- generating functions ------------------------------------------------------------------

@dataclass(frozen=True)
class GenFunData:
    """Coefficient rule and residual operators for one family.

    ``d_of(k, z, M, N, O)`` and ``s_of(...)`` return the matrices; ``s_of``
    is None when the family has no integral identity in the table.
    """

    family: Family
    g_of: Callable
    d_of: Callable
    s_of: Callable | None


def _mpow(a, k, field):
    r = field.identity(a.shape[0])
    for _ in range(k):
        r = r @ a
    return r


def genfun_data(family: Family, field: Field = Field.DOUBLE) -> GenFunData:
    one = field.one
    k_ = family.kind

    def R(z, M):
        return (1 + z * z) * field.identity(M.shape[0]) - 2 * z * M

    def ultraspherical_d(shift):
        def d_of(k, z, M, N, O):
            nk = _mpow(N, k, field)
            return R(z, M) @ (N @ nk) - 2 * (shift + k) * z * nk
        return d_of

    if k_ == GEGENBAUER:
        lam = field.coerce(family.lam)

        def s_of(k, z, M, N, O):
            poch = one
            for i in range(k):  # (lam - k)_k
                poch = poch * (lam - k + i)
            return (2 * z) ** k * poch * _mpow(O, k, field) - _mpow(R(z, M), k, field)
        return GenFunData(family, lambda i: one, ultraspherical_d(lam), s_of)
    if k_ == CHEBYSHEV1:
        return GenFunData(family, lambda i: one if i == 0 else one / i, ultraspherical_d(0), None)
    if k_ == CHEBYSHEV2:
        return GenFunData(family, lambda i: one, ultraspherical_d(1), None)
    if k_ == LEGENDRE:
        def s_of(k, z, M, N, O):
            dfact = math.prod(range(1, 2 * k, 2))  # (2k-1)!!
            return dfact * z ** k * _mpow(O, k, field) - _mpow(-R(z, M), k, field)
        return GenFunData(family, lambda i: one, ultraspherical_d(field.ratio(1, 2)), s_of)
    if k_ == LAGUERRE:
        def d_of(k, z, M, N, O):
            return (z - 1) ** k * _mpow(N, k, field) - z ** k * field.identity(N.shape[0])

        def s_of(k, z, M, N, O):
            return z ** k * _mpow(O, k, field) - (z - 1) ** k * field.identity(N.shape[0])
        return GenFunData(family, lambda i: one, d_of, s_of)
    if k_ == HERMITE:
        def d_of(k, z, M, N, O):
            return _mpow(N, k, field) - (2 * z) ** k * field.identity(N.shape[0])

        def s_of(k, z, M, N, O):
            return (2 * z) ** k * _mpow(O, k, field) - field.identity(N.shape[0])
        if field is Field.EXACT:
            g = lambda i: Fraction(1, math.factorial(i))  # noqa: E731
        else:
            g = lambda i: math.exp(-math.lgamma(i + 1))  # noqa: E731
        return GenFunData(family, g, d_of, s_of)
    raise UnsupportedFamilyError(f"no generating-function test for {family.label()}")


def genfun_coefficients(family: Family, n: int, z, field: Field = Field.DOUBLE):
    data = genfun_data(family, field)
    z = field.coerce(z)
    return field.array([data.g_of(i) * z ** i for i in range(n)])


def genfun_residual_vectors(family: Family, k: int, z, n: int, field: Field = Field.DOUBLE,
                            method: str = "auto"):
    """``(D(k) a, S(k) a or None)`` for the truncated coefficient vector ``a``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    data = genfun_data(family, field)
    z = field.coerce(z)
    a = genfun_coefficients(family, n, z, field)
    M = shift_matrix(family, n, field).entries
    N = derivative_matrix(family, n, field, method).entries
    O = primitive_matrix(family, n, field, method).entries if data.s_of else None
    d = data.d_of(k, z, M, N, O) @ a
    s = data.s_of(k, z, M, N, O) @ a if data.s_of else None
    return d, s


def genfun_rows(k: int, n: int) -> tuple[slice, slice]:
    """Rows compared for D and for S.

    The last ``max(k+2, 4)`` rows carry truncation shadow.  For S the first
    ``k`` rows are also dropped: k-fold primitives are defined up to a
    polynomial of degree < k, which lives in ``P_0..P_{k-1}``.
    """
    stop = max(n - max(k + 2, 4), 0)
    return slice(0, stop), slice(min(k, stop), stop)


def _norm(v):
    if v.dtype == object:
        return math.sqrt(sum(float(x) ** 2 for x in v))
    return float(np.linalg.norm(v))


def genfun_residuals(family: Family, k: int, z, n: int, field: Field = Field.DOUBLE,
                     method: str = "auto", unrestricted: bool = False, require_s: bool = False):
    """``(||D(k) a||_2, ||S(k) a||_2 or None)`` over the rows of :func:`genfun_rows`.

    With ``unrestricted`` the norms run over every row instead.  With
    ``require_s`` a family without an integral identity raises instead of
    returning None for S.
    """
    if require_s and genfun_data(family, field).s_of is None:
        raise UnsupportedFamilyError(f"no integral residual S(k) for {family.label()}")
    d, s = genfun_residual_vectors(family, k, z, n, field, method)
    if unrestricted:
        return _norm(d), (None if s is None else _norm(s))
    rd, rs = genfun_rows(k, n)
    return _norm(d[rd]), (None if s is None else _norm(s[rs]))


# -- sweeps ----------------------------------------------------------------------------------

CSV_HEADER = ("test", "family", "params", "n", "k", "z", "residual", "residual_unrestricted")
TESTS = ("diffeq", "moments", "genfun")


def _point(job):
    test, family, n, k, z, method = job
    if test == "diffeq":
        r, u = diffeq_residuals(family, n, method=method or "auto")
        return [("diffeq", n, "", "", r, u)]
    if test == "moments":
        r, u = legendre_moment_errors(k, n, method=method or "auto")
        return [("moments", n, k, "", r, u)]
    d, s = genfun_residual_vectors(family, k, z, n, method=method or "auto")
    rd, rs = genfun_rows(k, n)
    rows = [("genfun:D", n, k, z, _norm(d[rd]), _norm(d))]
    if s is not None:
        rows.append(("genfun:S", n, k, z, _norm(s[rs]), _norm(s)))
    return rows


def sweep(test: str, family: Family, ns: Iterable[int], ks: Iterable[int] = (1,), z=0.1,
          method: str | None = None, jobs: int = 1) -> list[dict]:
    """Run one experiment over a grid; rows come back in grid order.

    The grid is ``ns`` for ``diffeq`` and ``ks x ns`` (k outer) otherwise.
    """
    if test not in TESTS:
        raise ValueError(f"unknown test {test!r}; expected one of {TESTS}")
    if test == "moments" and family.kind != LEGENDRE:
        raise UnsupportedFamilyError("the moments test is defined for Legendre only")
    ns = list(ns)
    ks = [None] if test == "diffeq" else list(ks)
    jobs_list = [(test, family, n, k, z, method) for k in ks for n in ns]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_point, jobs_list))
    else:
        results = [_point(j) for j in jobs_list]
    params = ";".join(f"{k}={v}" for k, v in family.params.items())
    out = []
    for rows in results:
        for name, n, k, zz, r, u in rows:
            out.append({
                "test": name, "family": family.kind, "params": params, "n": n,
                "k": "" if k is None else k, "z": "" if zz == "" else format_scalar(zz),
                "residual": format_scalar(r), "residual_unrestricted": format_scalar(u),
            })
    return out


def write_csv(rows: list[dict], fh) -> None:
    w = csv.DictWriter(fh, fieldnames=CSV_HEADER, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
