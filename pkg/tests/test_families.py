from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from orthopmat.exactcheck import basis_as_monomials
from orthopmat.families import (
    BESSEL_Y, CHEBYSHEV_T, CHEBYSHEV_V, CHEBYSHEV_W, HERMITE_H, KINDS, LEGENDRE_P,
    Family, InvalidFamilyError, eval_basis, legendre_zero_column, parse_family,
    recurrence_arrays, recurrence_coeffs,
)
from orthopmat.fields import Field, FieldError, format_scalar, parse_number

from conftest import ALL_FAMILIES, GEGENBAUERS

F = Fraction


@pytest.mark.parametrize("fam, j, expected", [
    (LEGENDRE_P, 2, (F(3, 5), 0, F(2, 5))),
    (CHEBYSHEV_T, 0, (1, 0, 0)),
    (CHEBYSHEV_T, 3, (F(1, 2), 0, F(1, 2))),
    (HERMITE_H, 3, (F(1, 2), 0, 3)),
    (BESSEL_Y, 1, (F(1, 3), 0, F(-1, 3))),
    (BESSEL_Y, 0, (1, -1, 0)),
])
def test_recurrence_values(fam, j, expected):
    assert tuple(recurrence_coeffs(fam, j))[:3] == tuple(F(v) for v in expected)


def test_gamma0_is_stored_as_zero(family):
    assert recurrence_coeffs(family, 0).gamma == 0


def test_alpha_never_vanishes(family):
    a, _, _ = recurrence_arrays(family, 201)
    assert np.all(a != 0)


def test_beta_patterns(family):
    b = [recurrence_coeffs(family, j).beta for j in range(30)]
    if family.symmetric:
        assert all(v == 0 for v in b)
    elif family in (CHEBYSHEV_V, CHEBYSHEV_W):
        assert b[0] == (F(1, 2) if family == CHEBYSHEV_V else F(-1, 2))
        assert all(v == 0 for v in b[1:])
    elif family == BESSEL_Y:
        assert b[0] == -1 and all(v == 0 for v in b[1:])


@pytest.mark.parametrize("fam", GEGENBAUERS)
def test_gegenbauer_gamma_is_one_minus_alpha(fam):
    for j in range(1, 40):
        r = recurrence_coeffs(fam, j)
        assert r.gamma == 1 - r.alpha


def test_jacobi_reduces_to_legendre():
    jac = Family.jacobi(0, 0)
    for j in range(20):
        assert recurrence_coeffs(jac, j)[:3] == recurrence_coeffs(LEGENDRE_P, j)[:3]


@pytest.mark.parametrize("args", [
    dict(kind="jacobi", alpha=-1, beta=0),
    dict(kind="jacobi", alpha=1),
    dict(kind="gegenbauer", lam=0),
    dict(kind="gegenbauer", lam=F(-1, 2)),
    dict(kind="legendre", lam=1),
    dict(kind="nope"),
])
def test_invalid_families(args):
    with pytest.raises(InvalidFamilyError):
        Family(**args)


def test_exact_field_rejects_float_parameters():
    fam = Family.jacobi(0.3, 0.5)
    with pytest.raises(FieldError):
        recurrence_coeffs(fam, 1, Field.EXACT)
    assert recurrence_coeffs(fam, 1, Field.DOUBLE).alpha > 0


def test_parse_family():
    assert parse_family("Jacobi", "2", "3/7") == Family.jacobi(2, F(3, 7))
    assert parse_family("gegenbauer", lam="0.5").lam == F(1, 2)
    with pytest.raises(InvalidFamilyError):
        parse_family("hermite", alpha="1")
    assert set(KINDS) >= {"bessel", "chebyshev4"}


def test_parse_number_and_format():
    assert parse_number("0.1") == F(1, 10)
    assert parse_number(" -1/7 ") == F(-1, 7)
    with pytest.raises(ValueError):
        parse_number("x")
    assert format_scalar(F(-3, 4)) == "-3/4"
    assert format_scalar(2.0) == "2"
    assert format_scalar(-0.0) == "0"
    assert format_scalar(0.1) == "0.1"


def test_eval_basis_examples():
    assert list(eval_basis(LEGENDRE_P, 4, 1, Field.EXACT)) == [1, 1, 1, 1]
    assert list(eval_basis(CHEBYSHEV_T, 5, 0, Field.EXACT)) == [1, 0, -1, 0, 1]
    for fam in ALL_FAMILIES:
        assert list(eval_basis(fam, 1, F(2, 9), Field.EXACT)) == [1]


@given(st.fractions(min_value=-2, max_value=2, max_denominator=50),
       st.sampled_from(ALL_FAMILIES))
def test_eval_basis_matches_monomials(x, fam):
    vals = eval_basis(fam, 12, x, Field.EXACT)
    polys = basis_as_monomials(fam, 12)
    assert [p(x) for p in polys] == list(vals)


def test_eval_basis_double_matches_numpy_legendre():
    x = np.linspace(-1, 1, 7)
    for xv in x:
        ours = eval_basis(LEGENDRE_P, 15, xv)
        ref = [np.polynomial.legendre.legval(xv, np.eye(15)[k]) for k in range(15)]
        np.testing.assert_allclose(ours, ref, atol=1e-13)


def test_legendre_zero_column():
    assert list(legendre_zero_column(3, Field.EXACT)) == [1, 0, F(-1, 2)]
    assert list(legendre_zero_column(2, Field.EXACT)) == [1, 0]
    assert list(legendre_zero_column(5, Field.EXACT)) == [1, 0, F(-1, 2), 0, F(3, 8)]
    assert list(legendre_zero_column(30, Field.EXACT)) == list(eval_basis(LEGENDRE_P, 30, 0, Field.EXACT))
