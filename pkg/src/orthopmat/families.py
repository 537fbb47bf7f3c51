"""Orthogonal-polynomial families and their three-term recurrences.

All polynomials are normalised by ``P_{-1} = 0``, ``P_0 = 1`` and

    x P_j = alpha_j P_{j+1} + beta_j P_j + gamma_j P_{j-1}.

Some families redefine ``alpha_0``/``beta_0`` so that the sequence started
from ``P_0 = 1`` is the usual one (e.g. Chebyshev T has ``alpha_0 = 1``).
``gamma_0`` multiplies ``P_{-1}`` and is always stored as zero.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import NamedTuple

import numpy as np

from .fields import Field, FieldError, parse_number

JACOBI = "jacobi"
GEGENBAUER = "gegenbauer"
CHEBYSHEV1 = "chebyshev1"
CHEBYSHEV2 = "chebyshev2"
CHEBYSHEV3 = "chebyshev3"
CHEBYSHEV4 = "chebyshev4"
LEGENDRE = "legendre"
LAGUERRE = "laguerre"
HERMITE = "hermite"
BESSEL = "bessel"

KINDS = (
    JACOBI, GEGENBAUER, CHEBYSHEV1, CHEBYSHEV2, CHEBYSHEV3, CHEBYSHEV4,
    LEGENDRE, LAGUERRE, HERMITE, BESSEL,
)
_PARAMETERLESS = KINDS[2:]
# beta_j == 0 for every j
SYMMETRIC_KINDS = (GEGENBAUER, CHEBYSHEV1, CHEBYSHEV2, LEGENDRE, HERMITE)


class InvalidFamilyError(ValueError):
    pass


def _is_exact(x) -> bool:
    return isinstance(x, Rational) and not isinstance(x, bool)


@dataclass(frozen=True)
class Family:
    """A polynomial family, e.g. ``Family("jacobi", alpha=2, beta=3)``.

    Parameters may be ints, Fractions or floats.  Only int/Fraction
    parameters can be used with :attr:`Field.EXACT`.
    """

    kind: str
    alpha: object = None
    beta: object = None
    lam: object = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidFamilyError(f"unknown family {self.kind!r}")
        for name in ("alpha", "beta", "lam"):
            v = getattr(self, name)
            if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
                object.__setattr__(self, name, Fraction(int(v)))
        if self.kind == JACOBI:
            if self.alpha is None or self.beta is None:
                raise InvalidFamilyError("jacobi needs alpha and beta")
            if not (self.alpha > -1 and self.beta > -1):
                raise InvalidFamilyError(
                    f"jacobi needs alpha > -1 and beta > -1, got ({self.alpha}, {self.beta})")
            if self.lam is not None:
                raise InvalidFamilyError("jacobi takes no lambda")
        elif self.kind == GEGENBAUER:
            if self.lam is None:
                raise InvalidFamilyError("gegenbauer needs lambda")
            if not self.lam > Fraction(-1, 2) or self.lam == 0:
                raise InvalidFamilyError(
                    f"gegenbauer needs lambda > -1/2 and lambda != 0, got {self.lam}")
            if self.alpha is not None or self.beta is not None:
                raise InvalidFamilyError("gegenbauer takes only lambda")
        elif any(v is not None for v in (self.alpha, self.beta, self.lam)):
            raise InvalidFamilyError(f"{self.kind} takes no parameters")

    @classmethod
    def jacobi(cls, alpha, beta) -> "Family":
        return cls(JACOBI, alpha=alpha, beta=beta)

    @classmethod
    def gegenbauer(cls, lam) -> "Family":
        return cls(GEGENBAUER, lam=lam)

    @property
    def params(self) -> dict:
        if self.kind == JACOBI:
            return {"alpha": self.alpha, "beta": self.beta}
        if self.kind == GEGENBAUER:
            return {"lambda": self.lam}
        return {}

    @property
    def exact(self) -> bool:
        """True when every parameter is an exact rational."""
        return all(_is_exact(v) for v in self.params.values())

    @property
    def symmetric(self) -> bool:
        return self.kind in SYMMETRIC_KINDS

    def label(self) -> str:
        p = ";".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.kind}({p})" if p else self.kind

    def __str__(self):
        return self.label()


CHEBYSHEV_T = Family(CHEBYSHEV1)
CHEBYSHEV_U = Family(CHEBYSHEV2)
CHEBYSHEV_V = Family(CHEBYSHEV3)
CHEBYSHEV_W = Family(CHEBYSHEV4)
LEGENDRE_P = Family(LEGENDRE)
LAGUERRE_L = Family(LAGUERRE)
HERMITE_H = Family(HERMITE)
BESSEL_Y = Family(BESSEL)


def parse_family(name: str, alpha=None, beta=None, lam=None) -> Family:
    """Build a family from CLI-style text (``'2'``, ``'3/7'``, ``'0.5'``)."""
    conv = lambda v: None if v is None else (parse_number(v) if isinstance(v, str) else v)
    try:
        return Family(name.strip().lower(), alpha=conv(alpha), beta=conv(beta), lam=conv(lam))
    except ValueError as exc:
        raise InvalidFamilyError(str(exc)) from exc


class RecurrenceCoeffs(NamedTuple):
    alpha: object
    beta: object
    gamma: object
    j: int


def _delta(i: int) -> int:
    return 1 if i == 0 else 0


def _raw(family: Family, j: int):
    """(alpha_j, beta_j, gamma_j) as Fractions (exact params) or floats."""
    one = Fraction(1)
    k = family.kind
    if k == GEGENBAUER:
        lam = family.lam
        a = (j + 1) / (2 * (j + lam))
        g = (j + 2 * lam - 1) / (2 * (j + lam)) if j else 0 * lam
        return a, 0 * lam, g
    if k == JACOBI:
        al, be = family.alpha, family.beta
        s = al + be
        if j == 0:
            # closed j = 0 forms; the general ones are 0/0 when alpha+beta is 0 or -1
            return 2 / (s + 2), (be - al) / (s + 2), 0 * s
        a = 2 * (j + 1) * (j + s + 1) / ((2 * j + s + 1) * (2 * j + s + 2))
        b = (be * be - al * al) / ((2 * j + s) * (2 * j + s + 2))
        g = 2 * (j + al) * (j + be) / ((2 * j + s) * (2 * j + s + 1))
        return a, b, g
    half = Fraction(1, 2)
    g_half = half if j else Fraction(0)
    if k == CHEBYSHEV1:
        return (one if j == 0 else half), Fraction(0), g_half
    if k == CHEBYSHEV2:
        return half, Fraction(0), g_half
    if k == CHEBYSHEV3:
        return half, 1 - Fraction(1, 2 ** _delta(j)), g_half
    if k == CHEBYSHEV4:
        return half, Fraction(1, 2 ** _delta(j)) - 1, g_half
    if k == LEGENDRE:
        return Fraction(j + 1, 2 * j + 1), Fraction(0), Fraction(j, 2 * j + 1)
    if k == LAGUERRE:
        return Fraction(-(j + 1)), Fraction(2 * j + 1), Fraction(-j)
    if k == HERMITE:
        # physicists' H_j: H_{j+1} = 2x H_j - 2j H_{j-1}
        return half, Fraction(0), Fraction(j)
    if k == BESSEL:
        g = Fraction(-1, 2 * j + 1) if j else Fraction(0)
        return Fraction(1, 2 * j + 1), Fraction(-_delta(j)), g
    raise InvalidFamilyError(k)  # pragma: no cover


def _check_field(family: Family, field: Field):
    if field is Field.EXACT and not family.exact:
        raise FieldError(
            f"{family.label()} has non-rational parameters; exact arithmetic needs "
            "int, Fraction or 'p/q' parameters")


def recurrence_coeffs(family: Family, j: int, field: Field = Field.EXACT) -> RecurrenceCoeffs:
    """Recurrence triple at index ``j``.

    >>> recurrence_coeffs(LEGENDRE_P, 2)
    RecurrenceCoeffs(alpha=Fraction(3, 5), beta=Fraction(0, 1), gamma=Fraction(2, 5), j=2)
    """
    if j < 0:
        raise ValueError("j must be nonnegative")
    _check_field(family, field)
    a, b, g = _raw(family, j)
    return RecurrenceCoeffs(field.coerce(a), field.coerce(b), field.coerce(g), j)


def recurrence_arrays(family: Family, m: int, field: Field = Field.DOUBLE):
    """Arrays ``alpha[0:m], beta[0:m], gamma[0:m]`` in ``field``."""
    _check_field(family, field)
    raw = [_raw(family, j) for j in range(m)]
    return tuple(field.array([r[c] for r in raw]) for c in range(3))


def eval_basis(family: Family, n: int, x, field: Field = Field.DOUBLE):
    """``[P_0(x), ..., P_{n-1}(x)]`` by the forward recurrence."""
    if n < 1:
        raise ValueError("n must be >= 1")
    alpha, beta, gamma = recurrence_arrays(family, n, field)
    x = field.coerce(x)
    out = field.zeros(n)
    out[0] = field.one
    prev, cur = field.zero, field.one
    for j in range(n - 1):
        nxt = ((x - beta[j]) * cur - gamma[j] * prev) / alpha[j]
        out[j + 1] = nxt
        prev, cur = cur, nxt
    return out


def legendre_zero_column(n: int, field: Field = Field.DOUBLE):
    """Legendre values at 0: ``P_{k+1}(0) = -k/(k+1) P_{k-1}(0)``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    out = field.zeros(n)
    out[0] = field.one
    for k in range(1, n - 1):
        out[k + 1] = -field.ratio(k, k + 1) * out[k - 1]
    return out
