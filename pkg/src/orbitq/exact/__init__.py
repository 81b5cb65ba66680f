"""Exact arithmetic: rationals, (Laurent) polynomials, fractions, matrices, t-series."""

from .fraction import FractionElement, as_fraction
from .linalg import (
    Echelon,
    PolyMatrix,
    SpecializationError,
    rank_over_fractions,
    rational_rank,
    solve_rational,
    specialize,
)
from .poly import MultiPoly, as_poly, is_laurent_var
from .series import TSeries, q_series_expand, t_adic_valuations

__all__ = [
    "Echelon",
    "FractionElement",
    "MultiPoly",
    "PolyMatrix",
    "SpecializationError",
    "TSeries",
    "as_fraction",
    "as_poly",
    "is_laurent_var",
    "q_series_expand",
    "rank_over_fractions",
    "rational_rank",
    "solve_rational",
    "specialize",
    "t_adic_valuations",
]
