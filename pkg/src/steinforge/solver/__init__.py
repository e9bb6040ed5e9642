"""Solutions of the Stein equation for centered indicators of events."""

__all__ = [
    "build_theorem_solution",
    "CONTINUOUS_RESIDUAL_TOL",
    "default_residual_grid",
    "DISCRETE_RESIDUAL_TOL",
    "EventKind",
    "EventSet",
    "named_test_function",
    "NAMED_TEST_FUNCTIONS",
    "residual",
    "residual_values",
    "solve",
    "solve_continuous",
    "solve_discrete",
    "SteinSolution",
    "SYMMETRIC_EVENT_FAMILIES",
    "THEOREM_RESIDUAL_TOL",
    "TheoremSolution",
]

from .events import EventKind, EventSet
from .solutions import (
    CONTINUOUS_RESIDUAL_TOL,
    DISCRETE_RESIDUAL_TOL,
    NAMED_TEST_FUNCTIONS,
    SYMMETRIC_EVENT_FAMILIES,
    THEOREM_RESIDUAL_TOL,
    SteinSolution,
    default_residual_grid,
    named_test_function,
    residual,
    residual_values,
    solve,
    solve_continuous,
    solve_discrete,
)
from .theorem import TheoremSolution, build_theorem_solution
