"""Exact moments of the algebraic area enclosed by closed walks on Z^2."""

from .exactmath import BiPoly, factorial, multinomial
from .moment_engine import Composition, MomentPolynomial, moment_polynomial
from .walk_oracle import AreaDistribution, StepCounts, cardinal, enumerate_dp

__all__ = [
    "AreaDistribution",
    "BiPoly",
    "Composition",
    "MomentPolynomial",
    "StepCounts",
    "cardinal",
    "enumerate_dp",
    "factorial",
    "moment_polynomial",
    "multinomial",
]

__version__ = "0.1.0"
