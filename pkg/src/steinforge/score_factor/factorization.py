"""The factorization T(f, p) = T(f, q) + f r(p, q) of parameter-derivative Stein operators."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Iterable

import numpy as np

from ..errors import SteinForgeError
from ..families import OperatorFlavor, interior_grid
from ..operators import generic_apply
from ..test_functions import ConditionReport, TestFunction, check_conditions, lift
from .pairs import ScorePair, generalized_score

logger = logging.getLogger(__name__)

# Number of evaluation points when no grid is given
DEFAULT_GRID_POINTS = 100


@dataclass
class FactorizationPoint:
    """The identity checked at one point."""

    x: float
    deviation: float | None
    score: list[float] = field(default_factory=list)
    message: str = ""

    def to_dict(self) -> dict:
        """Return a JSON-friendly representation."""
        return {
            "x": self.x,
            "deviation": self.deviation,
            "score": self.score,
            "message": self.message,
        }


@dataclass
class FactorizationReport:
    """The pointwise deviations from the factorization identity.

    Examples:
        >>> report = FactorizationReport("r(p, q)", "x", [FactorizationPoint(0.0, 1e-9)])
        >>> report.max_deviation
        1e-09
    """

    pair: str
    function: str
    points: list[FactorizationPoint]
    conditions: list[ConditionReport] = field(default_factory=list)

    @property
    def failures(self) -> list[FactorizationPoint]:
        """Return the points where the identity could not be evaluated."""
        return [point for point in self.points if point.deviation is None]

    @property
    def max_deviation(self) -> float:
        """Return the largest deviation, NaN when no point was evaluated."""
        deviations = [point.deviation for point in self.points if point.deviation is not None]
        return max(deviations) if deviations else float("nan")

    @property
    def worst_x(self) -> float | None:
        """Return the point of the largest deviation."""
        evaluated = [point for point in self.points if point.deviation is not None]
        if not evaluated:
            return None
        return max(evaluated, key=lambda point: point.deviation).x

    def holds(self, tolerance: float = 1e-6) -> bool:
        """Tell whether every point was evaluated within a tolerance."""
        return not self.failures and bool(self.points) and self.max_deviation <= tolerance

    def rows(self) -> list[dict[str, Any]]:
        """Return flat rows x, deviation, r0, r1, ... for a CSV table."""
        rows = []
        for point in self.points:
            row = {"x": point.x, "deviation": point.deviation}
            row.update({f"r{j}": value for j, value in enumerate(point.score)})
            rows.append(row)
        return rows

    def to_dict(self) -> dict:
        """Return a JSON-friendly representation."""
        return {
            "pair": self.pair,
            "function": self.function,
            "max_deviation": self.max_deviation,
            "worst_x": self.worst_x,
            "failures": len(self.failures),
            "points": [point.to_dict() for point in self.points],
            "conditions": [condition.to_dict() for condition in self.conditions],
        }


def factorization_check(
    pair: ScorePair,
    f: TestFunction,
    grid: Iterable[float] | None = None,
    flavor: OperatorFlavor | str | None = None,
    check: bool = False,
) -> FactorizationReport:
    """Measure |T(f, p) - T(f, q) - f(.;theta0) r(p, q)| on a grid.

    Both operators differentiate the same two-argument form f(x;theta): the form f carries, or
    else the lift of f for the flavor of p.

    Args:
        pair (ScorePair): The pair.
        f (TestFunction): The test function.
        grid (Iterable[float] | None, optional): The points. Defaults to 100 points in the bulk
            of p at theta0.
        flavor (OperatorFlavor | str | None, optional): The flavor of the lift. Defaults to the
            default flavor of p.
        check (bool, optional): Whether to probe the admissibility of f for p. Defaults to False.

    Returns:
        FactorizationReport: The deviations, with failed points recorded rather than raised.

    Examples:
        >>> pair = location_pair("gaussian_loc", "gaussian_loc")
        >>> factorization_check(pair, identity(), [0.0, 1.0]).max_deviation
        0.0
    """
    flavor = flavor or pair.p.default_flavor
    form = f.two_arg_form or lift(f, pair.p, flavor)
    points = (
        interior_grid(pair.p, pair.theta0, DEFAULT_GRID_POINTS) if grid is None else list(grid)
    )
    conditions = check_conditions(pair.p, pair.theta0, f, flavor) if check else []

    results = []
    for x in points:
        x = float(x)
        try:
            score = generalized_score(pair, x)
            value_p = generic_apply(pair.p, pair.theta0, form, x)
            value_q = generic_apply(pair.q, pair.theta0, form, x)
            product = float(form(np.float64(x), pair.theta0)) * score
            deviation = float(np.max(np.abs(value_p - value_q - product)))
            results.append(FactorizationPoint(x, deviation, [float(value) for value in score]))
        except SteinForgeError as e:
            logger.warning("Factorization not evaluated at x=%g: %s", x, e)
            results.append(FactorizationPoint(x, None, message=str(e)))

    report = FactorizationReport(pair.label, f.label, results, conditions)
    logger.info(
        "Factorization of %s for %s: max deviation %g", pair.label, f.label, report.max_deviation
    )
    return report
