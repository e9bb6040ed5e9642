"""Generalized scores between parametric families and the factorization of Stein operators."""

__all__ = [
    "common_support_pair",
    "DEFAULT_GRID_POINTS",
    "factorization_check",
    "FactorizationPoint",
    "FactorizationReport",
    "generalized_score",
    "location_pair",
    "score_rows",
    "ScorePair",
]

from .factorization import (
    DEFAULT_GRID_POINTS,
    FactorizationPoint,
    FactorizationReport,
    factorization_check,
)
from .pairs import ScorePair, common_support_pair, generalized_score, location_pair, score_rows
