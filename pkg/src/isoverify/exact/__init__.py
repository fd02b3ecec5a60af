"""Exact rational, polynomial and quadratic-extension arithmetic with dense linear algebra."""

from .interpolate import lagrange_interpolate
from .matrix import (Matrix, bareiss_det, exact_rank, field_rank, nullspace,
                     row_echelon, solve)
from .poly import MPoly, poly_arith
from .quadext import QuadExt
from .rational import Rational, format_rational, parse_rational, rat_arith, rational_sqrt

__all__ = [
    "Matrix", "MPoly", "QuadExt", "Rational", "bareiss_det", "exact_rank",
    "field_rank", "format_rational", "lagrange_interpolate", "nullspace",
    "parse_rational", "poly_arith", "rat_arith", "rational_sqrt", "row_echelon",
    "solve",
]
