"""Solutions of the Stein equation T f = l_A for continuous and discrete families.

The centered indicator is l_A(x) = (I_A(x) - P(A)) I_S(x) with P(A) the target mass of the event.

Continuous families are solved in density form. The exchanging function

    E(x) = (1/g(x)) * integral from the lower support end to x of l_A(z) g(z) dz

satisfies (E g)' / g = l_A, and the test function of an operator follows from its exchanging
relation: f0(t) = -E(t + mu0) for location operators, f0(t) = sigma0^2 E(t / sigma0) / t for
scale operators. The named operators of uniform_a and student_nu have their own relations, see
named_test_function(). Other operators fall back to the parameter-integral solution of
build_theorem_solution(), differentiated by the generic operator.

Discrete families are solved by summation: f(x) = S(x) / psi(x) with S(x) the sum of l_A g over
the support points below x, so that the forward difference of f psi divided by g is l_A.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from typing import Any, Callable

import numpy as np
from scipy import special

from ..errors import DegenerateDensityError, DivergenceError, ParameterError, SolverError
from ..families import (
    OperatorFlavor,
    ParametricFamily,
    Theta,
    probability,
    psi,
    quantile,
    spatial_values,
)
from ..numerics import Interval, IntRange, sum_series
from ..operators import SteinOperator
from ..test_functions import TestFunction, check_flavor
from .events import EventSet
from .theorem import build_theorem_solution

logger = logging.getLogger(__name__)

DEFAULT_CONTINUOUS_POINTS = 200
DEFAULT_DISCRETE_POINTS = 50

# Quantile levels bounding the default continuous residual grid
GRID_LEVELS = (0.001, 0.999)

CONTINUOUS_RESIDUAL_TOL = 1e-6
THEOREM_RESIDUAL_TOL = 1e-5
DISCRETE_RESIDUAL_TOL = 1e-10

# Largest |E(0)| accepted for the solutions that must vanish at 0
SCALE_ANCHOR_TOL = 1e-8

# Relative accuracy of the tail sums of discrete solutions
SERIES_REL_TOL = 1e-15
SERIES_FLOOR = 1e-300

PointFunction = Callable[[float], float]


def _vectorized(point: PointFunction) -> Callable[[Any], np.ndarray]:
    def function(x: Any) -> np.ndarray:
        values = np.asarray(x, dtype=float)
        flat = [point(float(value)) for value in values.ravel()]
        return np.array(flat, dtype=float).reshape(values.shape)

    return function


def _output(value: Any, x: Any) -> float | np.ndarray:
    value = np.asarray(value, dtype=float)
    return float(value) if np.ndim(x) == 0 else value


@dataclass(frozen=True, eq=False)
class SteinSolution:
    """A solved test function of the Stein equation with its residual diagnostics.

    The value `eval(x)` is the exchanging function E of a continuous solution or the test
    function itself for a discrete solution. `test_function()` returns the f0 that the operator
    of the solution's flavor maps onto l_A.

    Examples:
        >>> solution = solve_continuous(builtin("gaussian_loc"), 0.0, EventSet.half_line(0.0))
        >>> round(solution.eval(0.0), 7)
        0.6266571
        >>> solution.max_residual < 1e-6
        True
    """

    family: ParametricFamily
    """The family."""

    theta0: Theta
    """The parameter of the target law."""

    event: EventSet
    """The event A."""

    target_mass: float
    """P_theta0(A)."""

    flavor: OperatorFlavor
    """The flavor of the operator solved for."""

    function: Callable[[Any], np.ndarray]
    """The vectorized solution values."""

    tolerance: float = CONTINUOUS_RESIDUAL_TOL
    """The largest residual accepted on the grid."""

    residual_grid: tuple[tuple[float, float], ...] = ()
    """The pairs (x, residual) of the last residual check."""

    def eval(self, x: Any) -> float | np.ndarray:
        """Evaluate the solution.

        Args:
            x (Any): A point or an array of points.

        Returns:
            float | np.ndarray: The values, 0 outside the support.

        Raises:
            SolverError: If an integral or a series does not converge.
        """
        return _output(self.function(x), x)

    __call__ = eval

    def centered(self, x: Any) -> float | np.ndarray:
        """Evaluate the centered indicator l_A = (I_A - P(A)) I_S."""
        values = np.asarray(x, dtype=float)
        inside = self.family.support_fn(self.theta0).contains(values)
        result = np.where(inside, self.event.contains(values) - self.target_mass, 0.0)
        return _output(result, x)

    def test_function(self) -> TestFunction:
        """Return the test function f0 with T f0 = l_A for the solution's operator.

        Returns:
            TestFunction: The test function.
        """
        label = f"f_A[{self.event}]"
        if self.flavor == OperatorFlavor.LOCATION:
            mu = self.theta0[0]
            return TestFunction(lambda t: -self.function(np.asarray(t) + mu), label=label)
        if self.flavor == OperatorFlavor.SCALE:
            sigma = self.theta0[0]
            origin = sigma * float(self.centered(np.nextafter(0.0, 1.0)))

            def scaled(t: Any) -> np.ndarray:
                values = np.asarray(t, dtype=float)
                safe = np.where(values == 0, 1.0, values)
                with np.errstate(all="ignore"):
                    result = sigma * sigma * self.function(safe / sigma) / safe
                return np.where(values == 0, origin, result)

            return TestFunction(scaled, label=label)
        if self.flavor == OperatorFlavor.NAMED:
            return named_test_function(self)
        if self.flavor == OperatorFlavor.GENERIC:
            return build_theorem_solution(self.family, self.theta0, self.theta0, self.event)
        return TestFunction(self.function, label=label)

    def operator(self) -> SteinOperator:
        """Return the operator the solution solves."""
        return SteinOperator.create(self.family, self.theta0, self.flavor)

    def with_residuals(self, grid: Any = None) -> SteinSolution:
        """Return a copy carrying the residuals on a grid.

        Args:
            grid (Any, optional): The points. Defaults to default_residual_grid().

        Returns:
            SteinSolution: The checked solution.
        """
        points = default_residual_grid(self.family, self.theta0) if grid is None else grid
        points = np.atleast_1d(np.asarray(points, dtype=float))
        values = residual_values(self, None, points)
        checked = replace(
            self,
            residual_grid=tuple((float(x), float(r)) for x, r in zip(points, values)),
        )
        if checked.max_residual > self.tolerance:
            logger.warning(
                "Residual %.3g of the solution for %s under %s exceeds %.3g",
                checked.max_residual,
                self.event,
                self.family.name,
                self.tolerance,
            )
        return checked

    @property
    def max_residual(self) -> float:
        """Return the largest residual of the last check."""
        return max((abs(value) for _, value in self.residual_grid), default=0.0)

    @property
    def within_tolerance(self) -> bool:
        """Return True when the last residual check passed."""
        return self.max_residual <= self.tolerance

    def to_rows(self) -> list[dict]:
        """Return the sampled table (x, f_A(x), residual) of the last residual check."""
        if not self.residual_grid:
            return []
        points = np.array([x for x, _ in self.residual_grid])
        values = np.atleast_1d(self.eval(points))
        return [
            {"x": x, "f_A": float(value), "residual": residual}
            for (x, residual), value in zip(self.residual_grid, values)
        ]

    def to_dict(self) -> dict:
        """Return a JSON-friendly summary of the solution."""
        return {
            "family": self.family.name,
            "theta0": list(self.theta0),
            "event": str(self.event),
            "flavor": self.flavor.value,
            "target_mass": self.target_mass,
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "within_tolerance": self.within_tolerance,
        }


def default_residual_grid(family: ParametricFamily, theta0: Any) -> np.ndarray:
    """Return the default residual grid of a target law.

    Continuous families get 200 equispaced points between the 0.001 and 0.999 quantiles, inside
    the open support. Discrete families get the support points up to 50 past the lower end and
    the upper end of a finite support.

    Args:
        family (ParametricFamily): The family.
        theta0 (Any): The parameter.

    Returns:
        np.ndarray: The points.

    Examples:
        >>> default_residual_grid(builtin("binomial_p", [3]), 0.5)
        array([0., 1., 2., 3.])
    """
    theta0 = family.check_theta(theta0)
    support = family.support_fn(theta0)
    if family.discrete:
        top = min(support.hi, support.lo + DEFAULT_DISCRETE_POINTS)
        points = list(IntRange(support.lo, top).points())
        if math.isfinite(support.hi) and support.hi > top:
            points.append(int(support.hi))
        return np.array(points, dtype=float)
    lower, upper = (quantile(family, theta0, level) for level in GRID_LEVELS)
    grid = np.linspace(lower, upper, DEFAULT_CONTINUOUS_POINTS)
    return grid[Interval(support.lo, support.hi).contains_interior(grid)]


def _slope(solution: SteinSolution, x: np.ndarray) -> np.ndarray:
    # E' = l_A - E g'/g on the open support
    score = spatial_values(solution.family, x, solution.theta0)
    with np.errstate(all="ignore"):
        slope = np.asarray(solution.centered(x), dtype=float) - solution.function(x) * score
    return np.where(np.isfinite(slope), slope, 0.0)


def _uniform_a_test_function(solution: SteinSolution) -> TestFunction:
    # (u - 1) f0(u) = E(a + (b - a) u), so that the constant -f0(0) / (b - a) is E(a) = 0
    a = solution.theta0[0]
    width = solution.family.params["b"] - a

    def parts(u: Any) -> tuple[np.ndarray, np.ndarray]:
        u = np.asarray(u, dtype=float)
        gap = u - 1.0
        return a + width * u, np.where(gap == 0, -1.0, gap)

    def function(u: Any) -> np.ndarray:
        x, gap = parts(u)
        limit = width * np.asarray(solution.centered(x), dtype=float)
        return np.where(np.asarray(u) == 1.0, limit, solution.function(x) / gap)

    def derivative(u: Any) -> np.ndarray:
        x, gap = parts(u)
        rise = width * _slope(solution, x)
        result = (rise * gap - solution.function(x)) / (gap * gap)
        return np.where(np.asarray(u) == 1.0, 0.0, result)

    return TestFunction(function, derivative, label=f"f_A[{solution.event}]")


def _student_nu_test_function(solution: SteinSolution) -> TestFunction:
    # The lift at nu0 is -2 nu0 E(x) / x, an even function of x when E(0) = 0
    nu = solution.theta0[0]
    log_ratio = special.gammaln(0.5 * nu) - special.gammaln(0.5 * (nu + 1))

    def parts(w: Any) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        w = np.maximum(np.asarray(w, dtype=float), 0.0)
        x = np.sqrt(nu * w)
        weight = np.exp(-log_ratio - 0.5 * nu * np.log1p(w))
        return w, x, weight, np.where(x == 0, 1.0, x)

    def function(w: Any) -> np.ndarray:
        _, x, weight, safe = parts(w)
        lifted = np.where(x == 0, _slope(solution, x), solution.function(x) / safe)
        return -2.0 * nu * weight * lifted

    def derivative(w: Any) -> np.ndarray:
        w, x, weight, safe = parts(w)
        energy = solution.function(x)
        lifted = -2.0 * nu * energy / safe
        lifted_slope = -2.0 * nu * (_slope(solution, x) * safe - energy) / (safe * safe)
        result = weight * (-0.5 * nu * lifted / (1.0 + w) + lifted_slope * nu / (2.0 * safe))
        return np.where(x == 0, 0.0, result)

    return TestFunction(function, derivative, label=f"f_A[{solution.event}]")


NAMED_TEST_FUNCTIONS: dict[str, Callable[[SteinSolution], TestFunction]] = {
    "uniform_a": _uniform_a_test_function,
    "student_nu": _student_nu_test_function,
}

# Families whose named operator is even in x, solvable for events symmetric about 0 only
SYMMETRIC_EVENT_FAMILIES = frozenset({"student_nu"})


def named_test_function(solution: SteinSolution) -> TestFunction:
    """Return the test function f0 that the named operator of a family maps onto l_A.

    For uniform_a, (u - 1) f0(u) = E(a + (b - a) u). For student_nu, the lift
    f(x;nu0) = -2 nu0 E(x) / x is mapped back through f0(w) with w = x^2 / nu0.

    Args:
        solution (SteinSolution): A continuous solution of the named flavor.

    Returns:
        TestFunction: The test function, with its analytic derivative.

    Raises:
        SolverError: If the family has no named solution.
    """
    try:
        build = NAMED_TEST_FUNCTIONS[solution.family.name]
    except KeyError as e:
        raise SolverError(f"No named solution for {solution.family.name}") from e
    return build(solution)


def _solution_flavor(family: ParametricFamily, flavor: Any) -> OperatorFlavor:
    flavor = check_flavor(family, family.default_flavor if flavor is None else flavor)
    if family.discrete:
        if flavor != OperatorFlavor.DISCRETE:
            raise SolverError(
                f"No summation solution for the {flavor.value} operator of {family.name}"
            )
        return flavor
    if flavor == OperatorFlavor.NAMED and family.name not in NAMED_TEST_FUNCTIONS:
        logger.debug("Solving the named operator of %s with the generic operator", family.name)
        flavor = OperatorFlavor.GENERIC
    if flavor == OperatorFlavor.GENERIC and family.param_space.dim != 1:
        raise SolverError(
            f"No solution for the generic operator of {family.name}, the parameter-integral "
            f"solution needs a scalar parameter, got {family.param_space.dim} coordinates"
        )
    return flavor


def _guarded(point: PointFunction, family: ParametricFamily) -> PointFunction:
    def guarded(x: float) -> float:
        try:
            return point(x)
        except DivergenceError as e:
            raise SolverError(f"The solution for {family.name} diverges at x={x:g}") from e

    return guarded


def solve_continuous(
    family: ParametricFamily,
    theta0: Any,
    event: EventSet | str,
    flavor: OperatorFlavor | str | None = None,
    grid: Any = None,
) -> SteinSolution:
    """Solve the Stein equation of a continuous family by integration.

    The solution is anchored at the lower end of the support. Each value integrates the side of
    x that carries less mass, so that the cancellation happens in the tail of least weight.

    Args:
        family (ParametricFamily): A continuous family.
        theta0 (Any): The parameter of the target law.
        event (EventSet | str): The event A.
        flavor (OperatorFlavor | str | None, optional): The location or scale operator solved
            for. Defaults to the family's default flavor.
        grid (Any, optional): The residual grid. Defaults to default_residual_grid().

    Returns:
        SteinSolution: The solution, with its residuals.

    Raises:
        ParameterError: If the family is discrete or the event does not fit it.
        SolverError: If the flavor has no spatial solution, a scale or student_nu solution does
            not vanish at 0, or a quadrature diverges.
        DegenerateDensityError: If the density vanishes inside the support.

    Examples:
        >>> family = builtin("exponential_scale")
        >>> solution = solve_continuous(family, 1.0, EventSet.interval(0.0, 1.0))
        >>> round(solution.eval(1.0), 7)
        0.6321206
    """
    if family.discrete:
        raise ParameterError(f"solve_continuous needs a continuous family, got {family.name}")
    theta0 = family.check_theta(theta0)
    event = EventSet.parse(event).check(family)
    flavor = _solution_flavor(family, flavor)
    support = family.support_fn(theta0)
    interval = Interval(support.lo, support.hi)
    mass = event.mass(family, theta0)

    def point(x: float) -> float:
        if not interval.contains_interior(x):
            return 0.0
        log_density = float(family.log_density(x, theta0))
        if math.isinf(log_density):
            raise DegenerateDensityError(f"{family.name} vanishes at x={x:g} inside its support")
        density = math.exp(log_density)
        if density == 0:
            # underflow far in the tails, where both integrals vanish as well
            return 0.0
        below = Interval(interval.lo, x)
        lower_mass = probability(family, theta0, below)
        if lower_mass <= 0.5:
            numerator = event.mass(family, theta0, below) - mass * lower_mass
        else:
            above = Interval(x, interval.hi)
            numerator = mass * probability(family, theta0, above) - event.mass(
                family, theta0, above
            )
        return numerator / density

    point = _guarded(point, family)
    symmetric = flavor == OperatorFlavor.NAMED and family.name in SYMMETRIC_EVENT_FAMILIES
    if (flavor == OperatorFlavor.SCALE or symmetric) and interval.contains_interior(0.0):
        anchor = point(0.0)
        if abs(anchor) > SCALE_ANCHOR_TOL:
            needs = "an event symmetric about 0" if symmetric else "E(0) = 0"
            raise SolverError(
                f"The {flavor.value} solution for {event} under {family.name} needs {needs}, "
                f"got E(0)={anchor:.3g}"
            )

    tolerance = (
        THEOREM_RESIDUAL_TOL if flavor == OperatorFlavor.GENERIC else CONTINUOUS_RESIDUAL_TOL
    )
    solution = SteinSolution(family, theta0, event, mass, flavor, _vectorized(point), tolerance)
    logger.debug("Solved %s under %s with P(A)=%.10g", event, family.name, mass)
    return solution.with_residuals(grid)


def solve_discrete(
    family: ParametricFamily,
    theta0: Any,
    event: EventSet | str,
    coordinate: int = 0,
    grid: Any = None,
) -> SteinSolution:
    """Solve the Stein equation of a discrete family by summation.

    The value at x is S(x) / psi(x;theta0), where S(x) sums l_A g over the support points below
    x. The empty sum at the lower end gives 0. Past the median, S(x) is summed over the upper
    tail instead, which keeps its relative accuracy where g is tiny.

    Args:
        family (ParametricFamily): A discrete family with support starting at 0.
        theta0 (Any): The parameter of the target law.
        event (EventSet | str): The event A.
        coordinate (int, optional): The parameter coordinate of psi. Defaults to 0.
        grid (Any, optional): The residual grid. Defaults to default_residual_grid().

    Returns:
        SteinSolution: The solution, with its residuals.

    Raises:
        ParameterError: If the family is continuous.
        DegenerateDensityError: If psi vanishes at a support point past 0.
        SolverError: If a tail series diverges.

    Examples:
        >>> solution = solve_discrete(builtin("poisson_lambda"), 1.0, EventSet.integers([0]))
        >>> round(solution.eval(1), 7)
        0.2325442
        >>> solution.eval(0)
        0.0
    """
    if not family.discrete:
        raise ParameterError(f"solve_discrete needs a discrete family, got {family.name}")
    theta0 = family.check_theta(theta0)
    event = EventSet.parse(event)
    support = family.support_fn(theta0)
    mass = event.mass(family, theta0)

    def terms(points: np.ndarray) -> np.ndarray:
        indicator = np.asarray(event.contains(points), dtype=float)
        return (indicator - mass) * np.asarray(family.density(points, theta0), dtype=float)

    def partial_sum(x: int) -> float:
        if x <= support.lo or x > support.hi:
            return 0.0
        if probability(family, theta0, IntRange(support.lo, x - 1)) <= 0.5:
            return math.fsum(terms(np.arange(support.lo, x, dtype=float)))
        if math.isfinite(support.hi):
            return -math.fsum(terms(np.arange(x, support.hi + 1, dtype=float)))
        tail = sum_series(
            lambda j: float(terms(np.array([float(j)]))[0]),
            IntRange(x, math.inf),
            abs_tol=SERIES_FLOOR,
            rel_tol=SERIES_REL_TOL,
        )
        return -tail.value

    def point(x: float) -> float:
        if not support.contains(x) or x == support.lo:
            return 0.0
        kernel = float(psi(family, x, theta0, coordinate))
        total = partial_sum(int(x))
        if kernel == 0:
            # both underflow far in the tail
            if total == 0:
                return 0.0
            raise DegenerateDensityError(f"psi of {family.name} vanishes at x={x:g}")
        return total / kernel

    solution = SteinSolution(
        family,
        theta0,
        event,
        mass,
        OperatorFlavor.DISCRETE,
        _vectorized(_guarded(point, family)),
        tolerance=DISCRETE_RESIDUAL_TOL,
    )
    logger.debug("Solved %s under %s with P(A)=%.10g", event, family.name, mass)
    return solution.with_residuals(grid)


def solve(family: ParametricFamily, theta0: Any, event: EventSet | str, **kwargs) -> SteinSolution:
    """Solve the Stein equation with the solver matching the family's measure.

    Args:
        family (ParametricFamily): The family.
        theta0 (Any): The parameter of the target law.
        event (EventSet | str): The event A.
        **kwargs: Passed to solve_continuous() or solve_discrete().

    Returns:
        SteinSolution: The solution.
    """
    if family.discrete:
        return solve_discrete(family, theta0, event, **kwargs)
    return solve_continuous(family, theta0, event, **kwargs)


def residual_values(
    solution: SteinSolution, op: SteinOperator | None = None, grid: Any = None
) -> np.ndarray:
    """Return |T f0(x) - l_A(x)| at the points of a grid.

    Args:
        solution (SteinSolution): The solution.
        op (SteinOperator | None, optional): The operator. Defaults to the solution's operator.
        grid (Any, optional): The points. Defaults to default_residual_grid().

    Returns:
        np.ndarray: The residuals.

    Raises:
        ParameterError: If the operator targets another law or flavor.
    """
    op = solution.operator() if op is None else op
    if (
        op.family.name != solution.family.name
        or op.theta0 != solution.theta0
        or op.flavor != solution.flavor
    ):
        raise ParameterError(f"{op} does not match the solution for {solution.family.name}")
    if grid is None:
        grid = default_residual_grid(solution.family, solution.theta0)
    points = np.atleast_1d(np.asarray(grid, dtype=float))
    if not points.size:
        return np.zeros(0)
    applied = np.asarray(op(solution.test_function(), points), dtype=float)
    return np.abs(applied - np.asarray(solution.centered(points)))


def residual(solution: SteinSolution, op: SteinOperator | None = None, grid: Any = None) -> float:
    """Return the largest residual of a solution on a grid.

    Args:
        solution (SteinSolution): The solution.
        op (SteinOperator | None, optional): The operator. Defaults to the solution's operator.
        grid (Any, optional): The points. Defaults to default_residual_grid().

    Returns:
        float: max |T f0(x) - l_A(x)|, 0 for an empty grid.

    Examples:
        >>> solution = solve_discrete(builtin("poisson_lambda"), 1.0, "int:{0}")
        >>> residual(solution, grid=range(51)) < 1e-10
        True
    """
    values = residual_values(solution, op, grid)
    return float(np.max(values)) if values.size else 0.0
