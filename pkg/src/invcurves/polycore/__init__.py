"""Polynomial arithmetic over Q, Q(i) and complex floats."""

from .algebra import divide_exact, gcd_exact, make_monic, remainder_is_zero
from .coeffs import GaussQ, cabs, exact, is_exact, to_complex
from .parse import ParseError, UnknownVariable, parse_expr, parse_poly
from .poly import (
    ZERO_DEGREE,
    AffinePoly,
    HomPoly,
    InhomogeneousError,
    Poly,
    chart_coordinates,
    chart_index,
    chart_lift,
    dehomogenize,
    format_coeff,
    format_poly,
    glex_key,
    homogenize,
    monomials,
)

__all__ = [
    "AffinePoly", "GaussQ", "HomPoly", "InhomogeneousError", "ParseError", "Poly",
    "UnknownVariable", "ZERO_DEGREE", "cabs", "chart_coordinates", "chart_index",
    "chart_lift", "dehomogenize", "divide_exact", "exact", "format_coeff", "format_poly",
    "gcd_exact", "glex_key", "homogenize", "is_exact", "make_monic", "monomials",
    "parse_expr", "parse_poly", "remainder_is_zero", "to_complex",
]
