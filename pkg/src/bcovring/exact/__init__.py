"""Exact scalars, polynomials, rational functions and truncated series."""

from fractions import Fraction

from .mpoly import MPoly
from .poly import Poly, RationalFunction, as_fraction, parse_ratfunc
from .series import LogSeries, SeriesError, TruncatedSeries
from .yseries import YSeries, y_constant_term, y_derive

__all__ = [
    "Fraction",
    "Poly",
    "RationalFunction",
    "as_fraction",
    "parse_ratfunc",
    "TruncatedSeries",
    "LogSeries",
    "SeriesError",
    "MPoly",
    "YSeries",
    "y_derive",
    "y_constant_term",
]
