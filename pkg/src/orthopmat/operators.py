"""Matrices of linear integro-differential operators with polynomial coefficients.

A differential operator ``sum_i p_i(x) d^i/dx^i`` becomes
``Pi = sum_i p_i(M) N^i``; an iterated-integral operator
``sum_i p_i(x) I^i`` becomes ``Sigma = sum_i p_i(M) Theta_i`` where
``Theta_i = O_{a_ii} ... O_{a_i1}`` (rightmost factor is the innermost
integral, with lower limit ``a_i1``).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .families import Family
from .fields import Field, parse_number
from .opmatrix import (
    OperationalMatrix, Structure, definite_integral_matrix, derivative_matrix,
    shift_matrix,
)


def _trim(coeffs):
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def poly_degree(coeffs) -> int:
    """Degree of a monomial coefficient list; 0 for the zero polynomial."""
    return max(len(_trim(coeffs)) - 1, 0)


@dataclass(frozen=True)
class DifferentialOperatorSpec:
    """Terms ``(order, coeffs)``; coeffs are monomial, lowest degree first."""

    terms: tuple

    def __post_init__(self):
        terms = tuple((int(o), _trim(c)) for o, c in self.terms)
        if not terms:
            raise ValueError("operator needs at least one term")
        orders = [o for o, _ in terms]
        if len(set(orders)) != len(orders):
            raise ValueError("differential orders must be distinct")
        if min(orders) < 0:
            raise ValueError("orders must be nonnegative")
        object.__setattr__(self, "terms", terms)

    @property
    def order(self) -> int:
        return max(o for o, _ in self.terms)

    def __add__(self, other: "DifferentialOperatorSpec") -> "DifferentialOperatorSpec":
        merged: dict[int, list] = {}
        for o, c in self.terms + other.terms:
            acc = merged.setdefault(o, [])
            acc.extend([0] * (len(c) - len(acc)))
            for k, v in enumerate(c):
                acc[k] = acc[k] + v
        return DifferentialOperatorSpec(tuple(sorted(merged.items())))


@dataclass(frozen=True)
class IntegralOperatorSpec:
    """Terms ``(depth, coeffs, lower_limits)`` with ``len(lower_limits) == depth``.

    ``lower_limits[0]`` belongs to the innermost integral.
    """

    terms: tuple

    def __post_init__(self):
        terms = tuple((int(d), _trim(c), tuple(a)) for d, c, a in self.terms)
        if not terms:
            raise ValueError("operator needs at least one term")
        for d, _, a in terms:
            if d < 1:
                raise ValueError("integral depth must be >= 1")
            if len(a) != d:
                raise ValueError(f"depth {d} needs {d} lower limits, got {len(a)}")
        object.__setattr__(self, "terms", terms)


def matrix_polynomial(p: Sequence, A, field: Field | None = None) -> OperationalMatrix:
    """``sum_k p[k] A^k`` by Horner's scheme."""
    a = np.asarray(A)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    if field is None:
        field = A.field if isinstance(A, OperationalMatrix) else (
            Field.EXACT if a.dtype == object else Field.DOUBLE)
    n = a.shape[0]
    c = [field.coerce(v) for v in _trim(p)]
    eye = field.identity(n)
    if not c:
        return OperationalMatrix(field.zeros((n, n)), Structure.GENERAL, field, "p(A)")
    r = c[-1] * eye
    for ck in reversed(c[:-1]):
        r = r @ a + ck * eye
    if field is Field.DOUBLE:
        r = r.astype(np.float64)
    return OperationalMatrix(r, Structure.GENERAL, field, "p(A)")


def valid_block(spec, n: int) -> int:
    """Last column index whose entries match the infinite operator matrix.

    Each N or O factor and each power of M is allowed to reach one row
    further; a term of order (or depth) i with coefficient degree d is
    trusted on columns j with ``j + i + d + 1 <= n``.  Order-0 constant
    terms never widen, so the bound is capped at ``n - 1``.
    """
    if isinstance(spec, DifferentialOperatorSpec):
        reach = [o + poly_degree(c) for o, c in spec.terms]
    elif isinstance(spec, IntegralOperatorSpec):
        reach = [d + poly_degree(c) for d, c, _ in spec.terms]
    else:
        raise TypeError("expected a DifferentialOperatorSpec or IntegralOperatorSpec")
    bounds = [n - 1 if r == 0 else n - 1 - r for r in reach]
    return max(min(bounds), -1)


def assemble_differential(spec: DifferentialOperatorSpec, family: Family, n: int,
                          field: Field = Field.DOUBLE, method: str = "recursive") -> OperationalMatrix:
    """``Pi = sum_i p_i(M) N^i`` on the n-truncated basis."""
    if n < 1:
        raise ValueError("n must be >= 1")
    M = shift_matrix(family, n, field)
    need_n = spec.order > 0
    N = derivative_matrix(family, n, field, method).entries if need_n else None
    total = field.zeros((n, n))
    powers = {0: field.identity(n)}
    for order, coeffs in spec.terms:
        if order not in powers:
            k = max(p for p in powers if p < order)
            r = powers[k]
            for _ in range(order - k):
                r = r @ N
            powers[order] = r
        pm = matrix_polynomial(coeffs, M, field).entries
        total = total + pm @ powers[order]
    if field is Field.DOUBLE:
        total = total.astype(np.float64)
    return OperationalMatrix(total, Structure.GENERAL, field, "Pi", valid_block(spec, n))


def theta_product(family: Family, n: int, limits: Sequence, field: Field = Field.DOUBLE,
                  method: str = "recursive"):
    """``O_{a_d} ... O_{a_1}`` for ``limits = (a_1, ..., a_d)``."""
    r = field.identity(n)
    for a in limits:
        r = definite_integral_matrix(family, n, a, field, method).entries @ r
    return r


def assemble_integral(spec: IntegralOperatorSpec, family: Family, n: int,
                      field: Field = Field.DOUBLE, method: str = "recursive") -> OperationalMatrix:
    """``Sigma = sum_i p_i(M) Theta_i``; the coefficient acts after all integrations."""
    if n < 1:
        raise ValueError("n must be >= 1")
    M = shift_matrix(family, n, field)
    total = field.zeros((n, n))
    for depth, coeffs, limits in spec.terms:
        theta = theta_product(family, n, limits, field, method)
        total = total + matrix_polynomial(coeffs, M, field).entries @ theta
    if field is Field.DOUBLE:
        total = total.astype(np.float64)
    return OperationalMatrix(total, Structure.GENERAL, field, "Sigma", valid_block(spec, n))


def apply(A, coeffs):
    """Matrix-vector product ``A @ coeffs`` with a dimension check."""
    a = np.asarray(A)
    v = np.asarray(coeffs)
    if v.ndim != 1 or a.shape[1] != v.shape[0]:
        raise ValueError(f"dimension mismatch: matrix {a.shape}, vector {v.shape}")
    return a @ v


def parse_operator_spec(text: str, field: Field = Field.EXACT):
    """Read the line format used by the CLI.

    ``d <order> <c0> <c1> ...`` adds a differential term and
    ``i <depth> <a1> ... <ad> <c0> <c1> ...`` an integral term.  Blank lines
    and ``#`` comments are ignored.  Returns ``(diff_spec, int_spec)``; either
    may be None.
    """
    dterms, iterms = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        try:
            if tok[0] == "d":
                order = int(tok[1])
                coeffs = [field.coerce(parse_number(t)) for t in tok[2:]]
                if not coeffs:
                    raise ValueError("missing coefficients")
                dterms.append((order, coeffs))
            elif tok[0] == "i":
                depth = int(tok[1])
                vals = [field.coerce(parse_number(t)) for t in tok[2:]]
                if len(vals) < depth + 1:
                    raise ValueError("missing lower limits or coefficients")
                iterms.append((depth, vals[depth:], vals[:depth]))
            else:
                raise ValueError(f"unknown term type {tok[0]!r}")
        except (IndexError, ValueError) as exc:
            raise ValueError(f"line {lineno}: {exc}") from exc
    if not dterms and not iterms:
        raise ValueError("operator spec is empty")
    d = DifferentialOperatorSpec(tuple(dterms)) if dterms else None
    i = IntegralOperatorSpec(tuple(iterms)) if iterms else None
    return d, i
