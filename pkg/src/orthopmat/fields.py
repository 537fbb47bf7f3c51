"""Scalar fields the matrix builders work over.

Every builder takes a ``field`` argument and produces numpy arrays whose
dtype is ``float64`` for :attr:`Field.DOUBLE` and ``object`` (holding
:class:`fractions.Fraction`) for :attr:`Field.EXACT`.
"""
from __future__ import annotations

import enum
from fractions import Fraction
from numbers import Rational

import numpy as np


class FieldError(ValueError):
    """A value cannot be represented in the requested field."""


class Field(enum.Enum):
    DOUBLE = "double"
    EXACT = "exact"

    @property
    def dtype(self):
        return np.float64 if self is Field.DOUBLE else object

    @property
    def zero(self):
        return 0.0 if self is Field.DOUBLE else Fraction(0)

    @property
    def one(self):
        return 1.0 if self is Field.DOUBLE else Fraction(1)

    def ratio(self, p: int, q: int = 1):
        if self is Field.DOUBLE:
            return p / q
        return Fraction(p, q)

    def coerce(self, x):
        """Convert a scalar into this field.

        Floats are refused by the exact field: a binary float is almost never
        the rational number the caller had in mind.
        """
        if self is Field.DOUBLE:
            return float(x)
        if isinstance(x, Fraction):
            return x
        if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
            return Fraction(int(x))
        if isinstance(x, Rational):
            return Fraction(x.numerator, x.denominator)
        raise FieldError(
            f"{x!r} is not an exact rational; pass an int, a Fraction or a 'p/q' string"
        )

    def zeros(self, shape):
        if self is Field.DOUBLE:
            return np.zeros(shape)
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out

    def identity(self, n: int):
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = self.one
        return out

    def array(self, values):
        """1-D array of field elements."""
        if self is Field.DOUBLE:
            return np.array([float(v) for v in values], dtype=np.float64)
        out = np.empty(len(values), dtype=object)
        for i, v in enumerate(values):
            out[i] = self.coerce(v)
        return out

    def asarray(self, a):
        """Convert an existing array (any dtype) into this field."""
        a = np.asarray(a)
        if self is Field.DOUBLE:
            return a.astype(np.float64)
        out = np.empty(a.shape, dtype=object)
        flat_in = a.ravel()
        flat_out = out.ravel()
        for i, v in enumerate(flat_in):
            flat_out[i] = self.coerce(v)
        return out

    def index_grid(self, idx):
        """Integer index array converted to field elements (exact division safe)."""
        idx = np.asarray(idx)
        if self is Field.DOUBLE:
            return idx.astype(np.float64)
        return self.asarray(idx.astype(object))


def parse_number(text: str):
    """Parse ``'3'``, ``'-1/7'`` or ``'0.25'`` into an exact :class:`Fraction`.

    Decimal literals are read exactly (``'0.1'`` is 1/10, not the nearest
    binary double).
    """
    text = text.strip()
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a number: {text!r}") from exc


def format_scalar(x) -> str:
    """Shortest round-trip text for a field element."""
    if isinstance(x, Fraction):
        return str(x)
    s = repr(float(x))
    if s.endswith(".0"):
        s = s[:-2]
    if s == "-0":
        s = "0"
    return s
