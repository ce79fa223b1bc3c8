"""Exact arithmetic: Q(sqrt(D)), polynomials, rational functions, linear systems."""

from .field import (
    FieldElement,
    QuadExt,
    as_fraction,
    field_sqrt,
    is_integer,
    qsign,
    rational_sqrt,
    to_fraction,
)
from .linalg import det, linear_solve, rank
from .poly import (
    INFINITY,
    Poly,
    RatFunc,
    laurent_alpha,
    poly_discriminant,
    poly_gcd,
    poly_lcm,
    poly_resultant,
    sylvester_matrix,
)

__all__ = [
    "FieldElement",
    "INFINITY",
    "Poly",
    "QuadExt",
    "RatFunc",
    "as_fraction",
    "det",
    "field_sqrt",
    "is_integer",
    "laurent_alpha",
    "linear_solve",
    "poly_discriminant",
    "poly_gcd",
    "poly_lcm",
    "poly_resultant",
    "qsign",
    "rank",
    "rational_sqrt",
    "sylvester_matrix",
    "to_fraction",
]
