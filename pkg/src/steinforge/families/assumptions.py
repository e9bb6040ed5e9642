"""Probe-grid semidecision of the regularity assumptions on a family.

Three assumptions are checked on a rectangular neighborhood of theta0:

- A: the densities g(x;theta) over the neighborhood are dominated by an integrable envelope.
- A': for discrete families, the forward differences of (psi(x;theta) / psi(x;theta0)) times the
  partial sums of l_A g are dominated by a summable envelope.
- B: the tails of the partial integrals of l_A g are integrable over the support.

The verdicts are numerical evidence on finite probe grids, not proofs.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cache
from typing import Any, Callable

import numpy as np

from ..errors import CapabilityError, NumericError, ParameterError
from ..numerics import Domain, Interval, IntRange, default_check_seconds, integrate, sum_series
from ..utils import Budget, BudgetExpired, assert_positive
from .base_family import ParametricFamily, Theta, default_radius
from .scores import probability, psi, quantile

logger = logging.getLogger(__name__)

# Default probe counts in theta and in x
DEFAULT_THETA_PROBES = 9
DEFAULT_X_PROBES = 512

# Relative excess of a midpoint density over the envelope tolerated on the grid
ENVELOPE_TOL = 0.05

# A density growing by more than this factor towards a moving endpoint is unbounded there
SINGULAR_RATIO = 10.0

# Quantile levels of the half-line events probed by A' and B
EVENT_LEVELS = (0.1, 0.25, 0.5, 0.75, 0.9)


class Verdict(str, Enum):
    """The outcome of a semidecision procedure."""

    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"


class Assumption(str, Enum):
    """The regularity assumptions that can be checked."""

    A = "A"
    A_PRIME = "A'"
    B = "B"

    @classmethod
    def parse(cls, value: Any) -> Assumption:
        """Parse an assumption name, accepting A, A', A′, Aprime and B.

        Args:
            value (Any): The name.

        Returns:
            Assumption: The assumption.

        Raises:
            ParameterError: If the name is unknown.

        Examples:
            >>> Assumption.parse("A′")
            <Assumption.A_PRIME: "A'">
        """
        if isinstance(value, cls):
            return value
        text = str(value).strip().replace("′", "'")
        if text.lower() == "aprime":
            text = "A'"
        try:
            return cls(text.upper())
        except ValueError as e:
            raise ParameterError(f"Unknown assumption {value!r}, expected A, A' or B") from e


@dataclass
class AssumptionReport:
    """The verdict of an assumption check.

    Examples:
        >>> report = AssumptionReport(Assumption.B, Verdict.PASS, [], 0.0)
        >>> report.passed
        True
    """

    assumption: Assumption
    verdict: Verdict
    witness_grid: list[tuple[float, Theta]]
    """The worst (x, theta) probes, or the offending one on failure."""

    max_violation: float
    """The largest relative excess over the envelope found on the grid."""

    tolerance: float = ENVELOPE_TOL
    bound: float | None = None
    """The envelope integral (A), the envelope sum (A') or the largest tail integral (B)."""

    message: str = ""
    probes: list[Theta] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        """Return True when the verdict is pass."""
        return self.verdict == Verdict.PASS

    def to_dict(self) -> dict:
        """Return a JSON-friendly representation."""
        return {
            "assumption": self.assumption.value,
            "verdict": self.verdict.value,
            "witness_grid": [{"x": x, "theta": list(theta)} for x, theta in self.witness_grid],
            "max_violation": self.max_violation,
            "tolerance": self.tolerance,
            "bound": self.bound,
            "message": self.message,
            "probes": [list(theta) for theta in self.probes],
        }


def _hull(family: ParametricFamily, probes: list[Theta]) -> Domain:
    hull = family.support_fn(probes[0])
    for theta in probes[1:]:
        hull = hull.hull(family.support_fn(theta))
    return hull


def _endpoints(family: ParametricFamily, probes: list[Theta]) -> list[float]:
    points = set()
    for theta in probes:
        support = family.support_fn(theta)
        points.update(value for value in (support.lo, support.hi) if math.isfinite(value))
    return sorted(points)


def _x_grid(family: ParametricFamily, theta0: Theta, hull: Domain, count: int) -> np.ndarray:
    if family.discrete:
        top = hull.hi
        if math.isinf(top):
            top = quantile(family, theta0, 1 - 1e-9) + 10
        return np.array(list(IntRange(hull.lo, top).points(limit=count)), dtype=float)

    if hull.is_finite:
        return np.linspace(hull.lo, hull.hi, count + 2)[1:-1]
    low = quantile(family, theta0, 1e-3)
    high = quantile(family, theta0, 1 - 1e-3)
    pad = max(high - low, 1e-3)
    lo = max(hull.lo, low - pad)
    hi = min(hull.hi, high + pad)
    grid = np.linspace(lo, hi, count)
    return grid[Interval(hull.lo, hull.hi).contains_interior(grid)]


def _midpoints(probes: list[Theta], count: int) -> list[Theta]:
    midpoints = []
    for index in range(len(probes) - 1):
        if (index + 1) % count == 0:
            continue
        midpoints.append(tuple(0.5 * (a + b) for a, b in zip(probes[index], probes[index + 1])))
    return midpoints


def _singular_endpoint(
    family: ParametricFamily, probes: list[Theta]
) -> tuple[float, Theta] | None:
    """Find a finite support endpoint that moves with theta and where the density blows up."""
    supports = [family.support_fn(theta) for theta in probes]
    for side, inward in (("lo", 1.0), ("hi", -1.0)):
        values = {getattr(support, side) for support in supports}
        if len(values) < 2:
            continue
        for theta, support in zip(probes, supports):
            endpoint = getattr(support, side)
            if math.isinf(endpoint):
                continue
            scale = max(1.0, abs(endpoint))
            near = float(family.density(endpoint + inward * 1e-8 * scale, theta))
            far = float(family.density(endpoint + inward * 1e-4 * scale, theta))
            if math.isinf(near) or (far > 0 and near / far > SINGULAR_RATIO):
                return endpoint, theta
    return None


def _density_violation(
    family: ParametricFamily,
    probes: list[Theta],
    midpoints: list[Theta],
    grid: np.ndarray,
    budget: Budget,
) -> tuple[float, list[tuple[float, Theta]]]:
    envelope = np.zeros_like(grid)
    for theta in probes:
        budget.charge()
        envelope = np.maximum(envelope, np.asarray(family.density(grid, theta), dtype=float))

    worst = 0.0
    witnesses = []
    for theta in midpoints:
        budget.charge()
        values = np.asarray(family.density(grid, theta), dtype=float)
        with np.errstate(all="ignore"):
            excess = np.where(values > 0, (values - envelope) / values, 0.0)
        excess = np.clip(np.nan_to_num(excess, nan=0.0), 0.0, None)
        index = int(np.argmax(excess))
        witnesses.append((float(grid[index]), theta))
        worst = max(worst, float(excess[index]))
    return worst, witnesses


def _check_domination(
    family: ParametricFamily,
    theta0: Theta,
    probes: list[Theta],
    count: int,
    points: int,
    budget: Budget,
) -> AssumptionReport:
    singular = _singular_endpoint(family, probes)
    if singular is not None:
        endpoint, theta = singular
        return AssumptionReport(
            Assumption.A,
            Verdict.FAIL,
            [(endpoint, theta)],
            math.inf,
            message=f"density is unbounded at the moving endpoint {endpoint:g}",
            probes=probes,
        )

    hull = _hull(family, probes)
    grid = _x_grid(family, theta0, hull, points)
    worst, witnesses = _density_violation(
        family, probes, _midpoints(probes, count), grid, budget
    )

    def envelope(x: float) -> float:
        return max(float(family.density(x, theta)) for theta in probes)

    try:
        if family.discrete:
            bound = sum_series(envelope, hull, abs_tol=1e-10).value
        else:
            bound = integrate(
                envelope, hull, abs_tol=1e-6, rel_tol=1e-6, breakpoints=_endpoints(family, probes)
            ).value
    except NumericError as e:
        logger.warning("No envelope mass for %s: %s", family.name, e)
        exceeded = worst > ENVELOPE_TOL
        return AssumptionReport(
            Assumption.A,
            Verdict.FAIL if exceeded else Verdict.INCONCLUSIVE,
            witnesses[:1] or [(float(grid[-1]), theta0)],
            worst,
            message=f"the envelope mass did not converge: {e}",
            probes=probes,
        )

    verdict = Verdict.PASS if worst <= ENVELOPE_TOL else Verdict.FAIL
    message = f"envelope mass {bound:.6g}"
    if verdict == Verdict.FAIL:
        message = f"a midpoint density exceeds the envelope by {worst:.3g}"
    return AssumptionReport(
        Assumption.A, verdict, witnesses, worst, bound=bound, message=message, probes=probes
    )


def _half_lines(family: ParametricFamily, theta0: Theta) -> list[Domain]:
    events: list[Domain] = []
    for level in EVENT_LEVELS:
        cut = quantile(family, theta0, level)
        event = IntRange(0, int(cut)) if family.discrete else Interval(-math.inf, cut)
        if event not in events:
            events.append(event)
    if family.discrete and IntRange(0, 0) not in events:
        events.insert(0, IntRange(0, 0))
    return events


def _partial_centered(
    family: ParametricFamily, theta0: Theta, event: Domain, lower: Domain | None
) -> float:
    """Return P(A and X in lower) - P(A) P(X in lower) under theta0."""
    if lower is None:
        return 0.0
    inside = event.intersect(lower) if isinstance(event, type(lower)) else None
    joint = 0.0 if inside is None else probability(family, theta0, inside)
    return joint - probability(family, theta0, event) * probability(family, theta0, lower)


def _check_tails(
    family: ParametricFamily, theta0: Theta, budget: Budget
) -> AssumptionReport:
    support = family.support_fn(theta0)
    largest = 0.0
    for event in _half_lines(family, theta0):
        budget.charge()

        if family.discrete:

            def term(x: int, event: Domain = event) -> float:
                lower = IntRange(support.lo, x - 1) if x > support.lo else None
                return abs(_partial_centered(family, theta0, event, lower))

        else:

            def term(x: float, event: Domain = event) -> float:
                lower = Interval(support.lo, x)
                return abs(_partial_centered(family, theta0, event, lower))

        try:
            if family.discrete:
                value = sum_series(term, support, abs_tol=1e-12).value
            else:
                value = integrate(
                    term, support, abs_tol=1e-9, rel_tol=1e-9, breakpoints=[event.hi]
                ).value
        except NumericError as e:
            return AssumptionReport(
                Assumption.B,
                Verdict.FAIL,
                [(float(event.hi), theta0)],
                math.inf,
                tolerance=0.0,
                message=f"the tail integral for A={event} diverges: {e}",
                probes=[theta0],
            )
        logger.debug("Tail integral of %s for A=%s: %.6g", family.name, event, value)
        largest = max(largest, value)

    return AssumptionReport(
        Assumption.B,
        Verdict.PASS,
        [],
        0.0,
        tolerance=0.0,
        bound=largest,
        message=f"largest tail integral {largest:.6g}",
        probes=[theta0],
    )


def _difference_envelope(
    family: ParametricFamily,
    theta0: Theta,
    probes: list[Theta],
    events: list[Domain],
    budget: Budget,
) -> tuple[Callable[[int], float], Callable[[int, Theta], float], dict]:
    support = family.support_fn(theta0)

    @cache
    def partial_sum(x: int, event: Domain) -> float:
        if x <= support.lo:
            return 0.0
        return _partial_centered(family, theta0, event, IntRange(support.lo, x - 1))

    @cache
    def ratio(x: int, theta: Theta) -> float:
        if x <= 0:
            return 0.0
        base = psi(family, x, theta0)
        moved = psi(family, x, theta)
        if base == 0:
            return 1.0 if moved == 0 else math.inf
        return moved / base

    def difference(x: int, theta: Theta) -> float:
        return max(
            abs(
                ratio(x + 1, theta) * partial_sum(x + 1, event)
                - ratio(x, theta) * partial_sum(x, event)
            )
            for event in events
        )

    last: dict = {"x": 0.0, "theta": theta0}

    def envelope(x: int) -> float:
        budget.charge()
        values = [difference(x, theta) for theta in probes]
        index = int(np.argmax(values))
        last["x"] = float(x)
        last["theta"] = probes[index]
        return values[index]

    return envelope, difference, last


def _check_differences(
    family: ParametricFamily,
    theta0: Theta,
    probes: list[Theta],
    count: int,
    points: int,
    budget: Budget,
) -> AssumptionReport:
    if not family.discrete:
        raise CapabilityError(f"Assumption A' concerns discrete families, got {family.name}")

    events = _half_lines(family, theta0)
    envelope, difference, last = _difference_envelope(family, theta0, probes, events, budget)
    support = family.support_fn(theta0)

    try:
        bound = sum_series(envelope, support, abs_tol=1e-12).value
    except NumericError as e:
        return AssumptionReport(
            Assumption.A_PRIME,
            Verdict.FAIL,
            [(last["x"], last["theta"])],
            math.inf,
            message=f"the difference envelope is not summable: {e}",
            probes=probes,
        )

    grid = [int(x) for x in _x_grid(family, theta0, support, min(points, 64))]
    ceilings = [max(difference(x, probe) for probe in probes) for x in grid]
    scale = max(ceilings) or 1.0
    worst = 0.0
    witnesses = []
    for theta in _midpoints(probes, count):
        budget.charge()
        excess = []
        for x, ceiling in zip(grid, ceilings):
            value = difference(x, theta)
            excess.append(max(0.0, value - ceiling) / scale)
        index = int(np.argmax(excess))
        witnesses.append((float(grid[index]), theta))
        worst = max(worst, excess[index])

    verdict = Verdict.PASS if worst <= ENVELOPE_TOL else Verdict.FAIL
    return AssumptionReport(
        Assumption.A_PRIME,
        verdict,
        witnesses,
        worst,
        bound=bound,
        message=f"envelope sum {bound:.6g}",
        probes=probes,
    )


def check_assumption(
    family: ParametricFamily,
    which: Assumption | str,
    theta0: Any = None,
    radius: float | None = None,
    probes: int = DEFAULT_THETA_PROBES,
    points: int = DEFAULT_X_PROBES,
    budget: Budget | None = None,
) -> AssumptionReport:
    """Check a regularity assumption on a neighborhood of theta0.

    Environment Variables:
        STEINFORGE_CHECK_SECONDS (str): The wall-clock budget when none is given.
            Defaults to "60".

    Args:
        family (ParametricFamily): The family.
        which (Assumption | str): A, A' or B.
        theta0 (Any, optional): The center, interior to the parameter space. Defaults to the
            family's theta0.
        radius (float | None, optional): The neighborhood half-width. Defaults to
            max(0.1, 0.1 |theta0|).
        probes (int, optional): The number of theta probes per coordinate. Defaults to 9.
        points (int, optional): The number of x probes. Defaults to 512.
        budget (Budget | None, optional): The evaluation budget. Defaults to a wall-clock
            budget of STEINFORGE_CHECK_SECONDS.

    Returns:
        AssumptionReport: The verdict, inconclusive when the budget runs out.

    Raises:
        ParameterError: If theta0 is not interior or the radius is not positive.
        CapabilityError: If A' is requested for a continuous family.

    Examples:
        >>> check_assumption(builtin("gaussian_loc"), "A", 0.0, 0.1).verdict
        <Verdict.PASS: 'pass'>
        >>> check_assumption(builtin("exponential_scale"), "B", 1.0).verdict
        <Verdict.PASS: 'pass'>
    """
    assumption = Assumption.parse(which)
    theta0 = family.check_theta(theta0)
    radius = default_radius(theta0) if radius is None else radius
    try:
        assert_positive(radius, "radius")
    except ValueError as e:
        raise ParameterError(str(e)) from e
    budget = Budget(default_check_seconds()) if budget is None else budget
    grid = family.param_space.probes(theta0, radius, probes)

    try:
        budget.charge(0)
        if assumption == Assumption.A:
            report = _check_domination(family, theta0, grid, probes, points, budget)
        elif assumption == Assumption.A_PRIME:
            report = _check_differences(family, theta0, grid, probes, points, budget)
        else:
            report = _check_tails(family, theta0, budget)
    except BudgetExpired:
        logger.warning(
            "Assumption %s on %s is inconclusive: budget exhausted", assumption.value, family.name
        )
        return AssumptionReport(
            assumption,
            Verdict.INCONCLUSIVE,
            [],
            math.nan,
            message="the check budget was exhausted",
            probes=grid,
        )

    if report.verdict == Verdict.FAIL:
        logger.warning(
            "Assumption %s fails on %s: %s", assumption.value, family.label, report.message
        )
    return report
