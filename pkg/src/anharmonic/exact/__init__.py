"""Exact arithmetic substrate."""

from fractions import Fraction as ExactRational

from .bigreal import DEFAULT_DPS, BigReal, to_mp
from .constants import ConstantExpr, gamma_rational, gamma_ratio, scalar_evalf, scalar_simplify
from .polynomial import EnergyPolynomial
from .series import (
    CouplingSeries,
    LaurentSeries,
    NonInvertibleLinearizationError,
    NonInvertibleSeriesError,
    QLaurentSeries,
    SeriesDomainError,
    series_arith,
    series_exp,
    series_log,
    series_pow,
    series_transcendental,
    solve_series_equation,
)

__all__ = [
    "BigReal", "ConstantExpr", "CouplingSeries", "DEFAULT_DPS", "EnergyPolynomial",
    "ExactRational", "LaurentSeries", "NonInvertibleLinearizationError",
    "NonInvertibleSeriesError", "QLaurentSeries", "SeriesDomainError", "gamma_rational",
    "gamma_ratio", "scalar_evalf", "scalar_simplify", "series_arith", "series_exp",
    "series_log", "series_pow", "series_transcendental", "solve_series_equation", "to_mp",
]
