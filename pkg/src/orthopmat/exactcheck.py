"""Exact-rational oracle for the operational matrices.

Works in a different way from the builders on purpose: each basis polynomial
is expanded in monomials, the operator is applied by ordinary calculus, and
the result is mapped back onto the basis by a triangular solve.  No
recurrence for eta or theta is involved, so agreement with the builders is
real evidence.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable

import numpy as np

from .families import Family, recurrence_coeffs
from .fields import Field, FieldError
from .opmatrix import (
    EXPLICIT_KINDS, OperationalMatrix, Structure, definite_integral_matrix,
    derivative_matrix_explicit, derivative_matrix_recursive, primitive_matrix_explicit,
    primitive_matrix_recursive, shift_matrix,
)


class MonomialPoly:
    """Polynomial with Fraction coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = [Fraction(v) for v in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def __eq__(self, other):
        if not isinstance(other, MonomialPoly):
            other = MonomialPoly(other)
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"MonomialPoly({[str(c) for c in self.coeffs]})"

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return MonomialPoly([x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)])

    def __neg__(self):
        return MonomialPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "MonomialPoly":
        return MonomialPoly([s * c for c in self.coeffs])

    def times_x(self) -> "MonomialPoly":
        return MonomialPoly((Fraction(0),) + self.coeffs) if self.coeffs else self

    def __mul__(self, other):
        if not isinstance(other, MonomialPoly):
            return self.scale(other)
        if not self.coeffs or not other.coeffs:
            return MonomialPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return MonomialPoly(out)

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


def differentiate(p: MonomialPoly) -> MonomialPoly:
    return MonomialPoly([k * c for k, c in enumerate(p.coeffs)][1:])


def integrate(p: MonomialPoly) -> MonomialPoly:
    """Antiderivative with zero constant term."""
    return MonomialPoly([Fraction(0)] + [c / (k + 1) for k, c in enumerate(p.coeffs)])


def integrate_interval(p: MonomialPoly, lo, hi) -> Fraction:
    q = integrate(p)
    return q(Fraction(hi)) - q(Fraction(lo))


def basis_as_monomials(family: Family, n: int) -> list[MonomialPoly]:
    """``P_0..P_{n-1}`` expanded in monomials by the recurrence."""
    if not family.exact:
        raise FieldError(f"{family.label()}: oracle needs rational parameters")
    out = [MonomialPoly([1])]
    prev = MonomialPoly()
    for j in range(n - 1):
        a, b, g = recurrence_coeffs(family, j, Field.EXACT)[:3]
        cur = out[j]
        nxt = (cur.times_x() - cur.scale(b) - prev.scale(g)).scale(1 / a)
        out.append(nxt)
        prev = cur
    return out


def project(q: MonomialPoly, basis: list[MonomialPoly] | Family, size: int | None = None) -> list[Fraction]:
    """Coefficients ``c`` with ``sum c_j P_j == q`` (back substitution on degrees).

    ``basis`` is a list from :func:`basis_as_monomials` or a family, in which
    case ``size`` basis polynomials are generated (default ``deg q + 1``).
    """
    if isinstance(basis, Family):
        basis = basis_as_monomials(basis, size or max(q.degree + 1, 1))
    if q.degree >= len(basis):
        raise ValueError("basis too short for this polynomial")
    rem = list(q.coeffs)
    c = [Fraction(0)] * len(basis)
    for j in range(q.degree, -1, -1):
        if rem[j] == 0:
            continue
        pj = basis[j].coeffs
        cj = rem[j] / pj[j]
        c[j] = cj
        for i, v in enumerate(pj):
            rem[i] -= cj * v
    assert not any(rem)
    return c


def oracle_matrix(kind: str, family: Family, n: int, a=None) -> OperationalMatrix:
    """Column j is the projection of ``op(P_j)`` for op in M, N, O, Oax.

    For O the P_0 coefficient is set to zero; for Oax the primitive is the
    one vanishing at ``a``.
    """
    basis = basis_as_monomials(family, n + 2)
    out = Field.EXACT.zeros((n, n))
    if kind == "Oax":
        if a is None:
            raise ValueError("Oax needs a lower limit")
        a = Field.EXACT.coerce(a)
    for j in range(n):
        p = basis[j]
        if kind == "M":
            q = p.times_x()
        elif kind == "N":
            q = differentiate(p)
        elif kind in ("O", "Oax"):
            q = integrate(p)
            if kind == "Oax":
                q = q - MonomialPoly([q(a)])
        else:
            raise ValueError(f"unknown kind {kind!r}")
        c = project(q, basis)
        if kind == "O":
            c[0] = Fraction(0)
        for i in range(n):
            out[i, j] = c[i]
    return OperationalMatrix(out, Structure.GENERAL, Field.EXACT, kind)


def first_mismatch(built, reference):
    """``(i, j, built, reference)`` of the first differing entry, or None."""
    a = np.asarray(built)
    b = np.asarray(reference)
    if a.shape != b.shape:
        return ("shape", a.shape, b.shape)
    diff = np.argwhere(a != b)
    if len(diff) == 0:
        return None
    i, j = diff[0]
    return (int(i), int(j), a[i, j], b[i, j])


DEFAULT_LIMITS = (-1, 0, Fraction(1, 3))


def verify_family(family: Family, n: int, limits=DEFAULT_LIMITS):
    """Compare every exact builder against the oracle.

    Returns a list of ``(check_name, mismatch)`` for the failing checks
    (empty when everything agrees).
    """
    f = Field.EXACT
    checks = [
        ("M", shift_matrix(family, n, f), oracle_matrix("M", family, n)),
    ]
    on = oracle_matrix("N", family, n)
    oo = oracle_matrix("O", family, n)
    checks.append(("N recursive", derivative_matrix_recursive(family, n, f), on))
    checks.append(("O recursive", primitive_matrix_recursive(family, n, f), oo))
    if family.kind in EXPLICIT_KINDS:
        checks.append(("N explicit", derivative_matrix_explicit(family, n, f), on))
        checks.append(("O explicit", primitive_matrix_explicit(family, n, f), oo))
    for a in limits:
        ref = oracle_matrix("Oax", family, n, a)
        checks.append((f"Oax(a={a}) recursive",
                       definite_integral_matrix(family, n, a, f, fast_path=False), ref))
        if family.kind in EXPLICIT_KINDS:
            checks.append((f"Oax(a={a}) explicit+closed row",
                           definite_integral_matrix(family, n, a, f, method="explicit"), ref))
    failures = []
    for name, built, ref in checks:
        mm = first_mismatch(built, ref)
        if mm is not None:
            failures.append((name, mm))
    return failures
