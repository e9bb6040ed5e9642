"""Stein characterizations of parametric families: operators, solutions and checks."""

__all__ = [
    "characterize",
    "get_family",
    "gof_test",
    "list_families",
    "solve",
    "SteinOperator",
]

from .characterize import characterize
from .families import get_family, list_families
from .gof import gof_test
from .operators import SteinOperator
from .solver import solve
