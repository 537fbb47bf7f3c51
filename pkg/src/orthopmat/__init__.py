"""Operational matrices for orthogonal-polynomial bases built from the three-term recurrence."""
from .fields import Field, FieldError, parse_number
from .families import (
    Family, InvalidFamilyError, RecurrenceCoeffs, eval_basis, legendre_zero_column,
    parse_family, recurrence_coeffs,
)
from .kernels import HAVE_EXTENSION
from .opmatrix import (
    OperationalMatrix, Structure, UnsupportedExplicitError, definite_integral_matrix,
    derivative_matrix, derivative_matrix_explicit, derivative_matrix_recursive,
    endpoint_row, eta_subdiagonal, primitive_matrix, primitive_matrix_explicit,
    primitive_matrix_recursive, shift_matrix, theta_diagonal, theta_subdiagonal,
    theta_superdiagonal,
)

__version__ = "0.1.0"

__all__ = [
    "Field",
    "FieldError",
    "parse_number",
    "Family",
    "InvalidFamilyError",
    "RecurrenceCoeffs",
    "eval_basis",
    "legendre_zero_column",
    "parse_family",
    "recurrence_coeffs",
    "HAVE_EXTENSION",
    "OperationalMatrix",
    "Structure",
    "UnsupportedExplicitError",
    "definite_integral_matrix",
    "derivative_matrix",
    "derivative_matrix_explicit",
    "derivative_matrix_recursive",
    "endpoint_row",
    "eta_subdiagonal",
    "primitive_matrix",
    "primitive_matrix_explicit",
    "primitive_matrix_recursive",
    "shift_matrix",
    "theta_diagonal",
    "theta_subdiagonal",
    "theta_superdiagonal",
]
