"""Numerical probes of the admissibility conditions of a test function.

A test function f(x;theta) is admissible for g at theta0 when

- (i) theta -> integral of f(.;theta) g(.;theta) is a finite constant c_f near theta0,
- (ii) theta -> f(x;theta) g(x;theta) is differentiable at theta0,
- (iii) its parameter derivative is dominated by an integrable envelope near theta0.

Location and scale flavors report the conditions as mu-i.. and sigma-i... The checks run on
finite probe grids and return evidence, not proofs.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from ..errors import NumericError, ParameterError
from ..families import (
    OperatorFlavor,
    ParametricFamily,
    Theta,
    Verdict,
    default_radius,
    interior_grid,
    score_values,
)
from ..numerics import Domain, default_check_seconds, integrate, sum_series
from ..numerics.differences import STEP_FACTOR
from ..utils import Budget, BudgetExpired, assert_positive
from .functions import TestFunction, TwoArgument
from .lifts import check_flavor, lift

logger = logging.getLogger(__name__)

DEFAULT_CONDITION_PROBES = 5
DEFAULT_GRID_POINTS = 41

# Relative drift of theta -> integral of f g tolerated for condition (i)
CONSTANCY_TOL = 1e-6

# Relative mismatch of one-sided parameter differences tolerated for condition (ii)
SMOOTHNESS_TOL = 1e-3

# Gap tolerated between an analytic derivative and its central difference
DERIVATIVE_TOL = 1e-5

# One-sided difference step, relative to max(1, |theta0|)
ONE_SIDED_STEP = 1e-5

CONDITIONS = ("i", "ii", "iii")


@dataclass
class ConditionReport:
    """The verdict of one admissibility condition.

    Examples:
        >>> report = ConditionReport("mu-i", Verdict.PASS, 0.0, 0.0)
        >>> report.passed
        True
    """

    condition: str
    """The condition label: i, ii, iii, optionally prefixed by mu- or sigma-."""

    verdict: Verdict
    c_f_estimate: float | None
    """The constant c_f = integral of f(.;theta0) g(.;theta0), for condition (i)."""

    max_drift: float
    """The largest drift (i), relative one-sided mismatch (ii) or 0 (iii)."""

    witness: Theta | None = None
    """The offending parameter on failure."""

    witness_x: float | None = None
    """The offending point on failure, when there is one."""

    bound: float | None = None
    """The envelope integral of condition (iii)."""

    message: str = ""

    @property
    def passed(self) -> bool:
        """Return True when the verdict is pass."""
        return self.verdict == Verdict.PASS

    def to_dict(self) -> dict:
        """Return a JSON-friendly representation."""
        return {
            "condition": self.condition,
            "verdict": self.verdict.value,
            "c_f_estimate": self.c_f_estimate,
            "max_drift": self.max_drift,
            "witness": None if self.witness is None else list(self.witness),
            "witness_x": self.witness_x,
            "bound": self.bound,
            "message": self.message,
        }


def condition_labels(flavor: OperatorFlavor | str) -> list[str]:
    """Return the condition labels of a flavor.

    Args:
        flavor (OperatorFlavor | str): The flavor.

    Returns:
        list[str]: The three labels.

    Examples:
        >>> condition_labels("location")
        ['mu-i', 'mu-ii', 'mu-iii']
        >>> condition_labels("discrete")
        ['i', 'ii', 'iii']
    """
    flavor = OperatorFlavor.parse(flavor)
    prefix = {OperatorFlavor.LOCATION: "mu-", OperatorFlavor.SCALE: "sigma-"}.get(flavor, "")
    return [f"{prefix}{condition}" for condition in CONDITIONS]


def _product(
    family: ParametricFamily, form: TwoArgument, x: np.ndarray, theta: Theta
) -> np.ndarray:
    """Return f(x;theta) g(x;theta), exactly 0 where the density vanishes."""
    density = np.asarray(family.density(x, theta), dtype=float)
    with np.errstate(all="ignore"):
        values = np.asarray(form(x, theta), dtype=float) * density
    return np.where(density > 0, values, 0.0)


def _parameter_derivative(
    family: ParametricFamily, form: TwoArgument, x: np.ndarray, theta: Theta, coordinate: int
) -> np.ndarray:
    """Return d/dtheta_j (f g) = (d/dtheta_j f) g + f g score_j, exactly 0 off the support."""
    h = STEP_FACTOR * max(1.0, abs(theta[coordinate]))
    upper, lower = list(theta), list(theta)
    upper[coordinate] += h
    lower[coordinate] -= h
    density = np.asarray(family.density(x, theta), dtype=float)
    with np.errstate(all="ignore"):
        form_derivative = (
            np.asarray(form(x, tuple(upper)), dtype=float)
            - np.asarray(form(x, tuple(lower)), dtype=float)
        ) / (2.0 * h)
        score = score_values(family, x, theta, coordinate)
        values = (form_derivative + np.asarray(form(x, theta), dtype=float) * score) * density
    return np.where(density > 0, values, 0.0)


def _total(
    family: ParametricFamily,
    integrand: Any,
    domain: Domain,
    breakpoints: list[float],
    tolerance: float | None = None,
) -> float:
    if family.discrete:
        return sum_series(lambda j: float(integrand(float(j))), domain, tolerance).value
    return integrate(
        lambda x: float(integrand(x)), domain, tolerance, tolerance, breakpoints
    ).value


def _endpoints(family: ParametricFamily, probes: list[Theta]) -> list[float]:
    points = set()
    for theta in probes:
        support = family.support_fn(theta)
        points.update(value for value in (support.lo, support.hi) if math.isfinite(value))
    return sorted(points)


def _check_constancy(
    family: ParametricFamily,
    form: TwoArgument,
    theta0: Theta,
    probes: list[Theta],
    label: str,
    budget: Budget,
) -> ConditionReport:
    def mass(theta: Theta) -> float:
        budget.charge()
        support = family.support_fn(theta)
        return _total(family, lambda x: _product(family, form, x, theta), support, [])

    try:
        c_f = mass(theta0)
    except NumericError as e:
        return ConditionReport(
            label, Verdict.FAIL, None, math.inf, theta0, message=f"divergent integral: {e}"
        )

    worst, witness = 0.0, theta0
    for theta in probes:
        try:
            drift = abs(mass(theta) - c_f)
        except NumericError as e:
            return ConditionReport(
                label, Verdict.FAIL, c_f, math.inf, theta, message=f"divergent integral: {e}"
            )
        logger.debug("%s: theta=%s drift=%g", label, theta, drift)
        if drift > worst:
            worst, witness = drift, theta

    if worst > CONSTANCY_TOL * (1.0 + abs(c_f)):
        return ConditionReport(
            label,
            Verdict.FAIL,
            c_f,
            worst,
            witness,
            message=f"the integral of f g drifts by {worst:.3g} near theta0",
        )
    return ConditionReport(label, Verdict.PASS, c_f, worst)


def _check_smoothness(
    family: ParametricFamily,
    f: TestFunction,
    form: TwoArgument,
    flavor: OperatorFlavor,
    theta0: Theta,
    grid: np.ndarray,
    label: str,
    budget: Budget,
) -> ConditionReport:
    if flavor in (OperatorFlavor.LOCATION, OperatorFlavor.SCALE):
        arguments = grid - theta0[0] if flavor == OperatorFlavor.LOCATION else grid * theta0[0]
        gap = f.derivative_mismatch(arguments)
        if gap > DERIVATIVE_TOL:
            return ConditionReport(
                label,
                Verdict.FAIL,
                None,
                gap,
                theta0,
                message=f"the derivative of {f.label} disagrees with its difference by {gap:.3g}",
            )

    worst, witness_x = 0.0, None
    for coordinate in range(len(theta0)):
        budget.charge(3)
        step = ONE_SIDED_STEP * max(1.0, abs(theta0[coordinate]))
        upper, lower = list(theta0), list(theta0)
        upper[coordinate] += step
        lower[coordinate] -= step
        center = _product(family, form, grid, theta0)
        right = (_product(family, form, grid, tuple(upper)) - center) / step
        left = (center - _product(family, form, grid, tuple(lower))) / step
        with np.errstate(all="ignore"):
            mismatch = np.abs(right - left) / (1.0 + 0.5 * np.abs(right + left))
        mismatch = np.where(np.isfinite(mismatch), mismatch, math.inf)
        if mismatch.size and float(mismatch.max()) > worst:
            index = int(np.argmax(mismatch))
            worst, witness_x = float(mismatch[index]), float(grid[index])

    if worst > SMOOTHNESS_TOL:
        return ConditionReport(
            label,
            Verdict.FAIL,
            None,
            worst,
            theta0,
            witness_x,
            message=f"one-sided parameter differences disagree at x={witness_x:g}",
        )
    return ConditionReport(label, Verdict.PASS, None, worst)


def _check_domination(
    family: ParametricFamily,
    form: TwoArgument,
    theta0: Theta,
    probes: list[Theta],
    label: str,
    budget: Budget,
) -> ConditionReport:
    hull = family.support_fn(probes[0])
    for theta in probes[1:]:
        hull = hull.hull(family.support_fn(theta))

    def envelope(x: float) -> float:
        budget.charge(len(probes))
        values = np.asarray(x, dtype=float)
        return max(
            float(np.abs(_parameter_derivative(family, form, values, theta, coordinate)))
            for theta in probes
            for coordinate in range(len(theta0))
        )

    try:
        total = _total(family, envelope, hull, _endpoints(family, probes), 1e-6)
    except NumericError as e:
        return ConditionReport(
            label,
            Verdict.FAIL,
            None,
            0.0,
            theta0,
            message=f"the derivative envelope is not integrable: {e}",
        )
    return ConditionReport(label, Verdict.PASS, None, 0.0, bound=total)


def check_conditions(
    family: ParametricFamily,
    theta0: Any,
    f: TestFunction,
    flavor: OperatorFlavor | str | None = None,
    radius: float | None = None,
    probes: int = DEFAULT_CONDITION_PROBES,
    budget: Budget | None = None,
) -> list[ConditionReport]:
    """Probe the admissibility conditions (i)-(iii) of a test function.

    The two-argument form is the lift of f for the flavor (its own form for the generic flavor
    when it carries one). Condition (i) integrates f g at equispaced parameter probes across the
    neighborhood of theta0, condition (ii) compares one-sided parameter differences of f g on a
    grid of support points, and condition (iii) integrates the largest parameter derivative over
    the probes.

    Environment Variables:
        STEINFORGE_CHECK_SECONDS: The default wall-clock budget, 60 seconds.

    Args:
        family (ParametricFamily): The family.
        theta0 (Any): The parameter, interior to the parameter space.
        f (TestFunction): The test function.
        flavor (OperatorFlavor | str | None, optional): The flavor. Defaults to the family's
            default flavor.
        radius (float | None, optional): The neighborhood half-width. Defaults to
            max(0.1, 0.1 |theta0|).
        probes (int, optional): The number of parameter probes per coordinate. Defaults to 5.
        budget (Budget | None, optional): The evaluation budget. Defaults to a wall-clock
            budget of STEINFORGE_CHECK_SECONDS.

    Returns:
        list[ConditionReport]: The reports of conditions (i), (ii) and (iii). Conditions left
            unchecked when the budget runs out are inconclusive.

    Raises:
        ParameterError: If theta0 is not interior, the radius is not positive or the flavor does
            not fit the family.

    Examples:
        >>> reports = check_conditions(builtin("gaussian_loc"), 0.0, identity(), "location")
        >>> [report.verdict.value for report in reports]
        ['pass', 'pass', 'pass']
    """
    theta0 = family.check_theta(theta0)
    flavor = check_flavor(family, flavor or family.default_flavor)
    radius = default_radius(theta0) if radius is None else radius
    try:
        assert_positive(radius, "radius")
    except ValueError as e:
        raise ParameterError(str(e)) from e
    budget = Budget(default_check_seconds()) if budget is None else budget

    form = lift(f, family, flavor)
    labels = condition_labels(flavor)
    grid = family.param_space.probes(theta0, radius, probes)
    checks = [
        lambda: _check_constancy(family, form, theta0, grid, labels[0], budget),
        lambda: _check_smoothness(
            family,
            f,
            form,
            flavor,
            theta0,
            interior_grid(family, theta0, DEFAULT_GRID_POINTS),
            labels[1],
            budget,
        ),
        lambda: _check_domination(family, form, theta0, grid, labels[2], budget),
    ]

    reports: list[ConditionReport] = []
    for label, check in zip(labels, checks):
        try:
            budget.charge(0)
            report = check()
        except BudgetExpired:
            logger.warning("Condition %s of %s is inconclusive: budget exhausted", label, f)
            report = ConditionReport(
                label, Verdict.INCONCLUSIVE, None, math.nan, message="the budget was exhausted"
            )
        if report.verdict == Verdict.FAIL:
            logger.warning("Condition %s fails for %s on %s: %s", label, f, family, report.message)
        reports.append(report)
    return reports
