"""Unit tests for the continuous and discrete Stein solutions."""

import math
from unittest.mock import patch

import numpy as np
import pytest
from scipy import stats

from steinforge.errors import DivergenceError, ParameterError, SolverError
from steinforge.families import OperatorFlavor, builtin, quantile
from steinforge.operators import SteinOperator
from steinforge.solver import (
    CONTINUOUS_RESIDUAL_TOL,
    DISCRETE_RESIDUAL_TOL,
    THEOREM_RESIDUAL_TOL,
    EventSet,
    SteinSolution,
    TheoremSolution,
    default_residual_grid,
    residual,
    residual_values,
    solve,
    solve_continuous,
    solve_discrete,
)


@pytest.fixture(scope="module")
def gaussian_solution() -> SteinSolution:
    """The solution for A = (-inf, 0] under N(0, 1)."""
    return solve_continuous(builtin("gaussian_loc"), 0.0, "le:0")


class TestSolveContinuous:
    """Test suite for solve_continuous."""

    def test_gaussian_value(self, gaussian_solution):
        """Test f_A(0) = Phi(0) / (2 phi(0))."""

        expected = stats.norm.cdf(0.0) / (2.0 * stats.norm.pdf(0.0))

        assert gaussian_solution.eval(0.0) == pytest.approx(expected, abs=1e-6)
        assert gaussian_solution.eval(0.0) == pytest.approx(0.6266571, abs=1e-6)

    def test_gaussian_residuals(self, gaussian_solution):
        """Test the residuals on the default grid of 200 points."""

        assert len(gaussian_solution.residual_grid) == 200
        assert gaussian_solution.max_residual <= 1e-6
        assert gaussian_solution.within_tolerance
        assert gaussian_solution.tolerance == CONTINUOUS_RESIDUAL_TOL

    def test_gaussian_closed_form(self, gaussian_solution):
        """Test the solution against (min(Phi(x), 1/2) - Phi(x) / 2) / phi(x)."""

        x = np.array([-2.0, -0.5, 0.3, 1.7])
        cdf = stats.norm.cdf(x)
        expected = (np.minimum(cdf, 0.5) - 0.5 * cdf) / stats.norm.pdf(x)

        np.testing.assert_allclose(gaussian_solution.eval(x), expected, rtol=1e-9)

    def test_exponential_scale(self):
        """Test the scale solution for A = (0, 1] under Exp(1)."""

        solution = solve_continuous(builtin("exponential_scale"), 1.0, "interval:0,1")

        assert solution.flavor == OperatorFlavor.SCALE
        assert solution.eval(1.0) == pytest.approx(1.0 - math.exp(-1.0), abs=1e-9)
        assert solution.max_residual <= 1e-6

    @pytest.mark.parametrize("name", ["gaussian_loc", "exponential_loc", "uniform_loc"])
    def test_location_residuals(self, name):
        """Test the residuals of location solutions for a half-line event."""

        family = builtin(name)
        theta0 = family.default_theta
        event = EventSet.half_line(quantile(family, theta0, 0.3))

        solution = solve_continuous(family, theta0, event)

        assert solution.flavor == OperatorFlavor.LOCATION
        assert solution.max_residual <= 1e-6

    def test_symmetric_scale(self):
        """Test a scale solution on the real line for a symmetric event."""

        solution = solve_continuous(builtin("gaussian_scale"), 1.0, "interval:-1,1")

        assert solution.max_residual <= 1e-6

    def test_scale_not_anchored(self):
        """Test that scale solutions must vanish at 0."""

        with pytest.raises(SolverError):
            solve_continuous(builtin("gaussian_scale"), 1.0, "le:0.5")

    def test_uniform_a_named(self):
        """Test the named solution of U[a, 1] for A = (-inf, 0.5] at a = 0."""

        solution = solve_continuous(builtin("uniform_a"), None, "le:0.5")
        f0 = solution.test_function()

        assert solution.flavor == OperatorFlavor.NAMED
        assert solution.eval(0.25) == pytest.approx(0.125, abs=1e-9)
        assert solution.eval(0.75) == pytest.approx(0.125, abs=1e-9)
        assert f0.eval(0.25) == pytest.approx(-1.0 / 6.0, abs=1e-9)
        assert solution.within_tolerance

    def test_student_nu_named(self):
        """Test the named solution of t_5 for the symmetric event (-1, 1]."""

        solution = solve_continuous(builtin("student_nu"), 5.0, "interval:-1,1")

        assert solution.flavor == OperatorFlavor.NAMED
        assert solution.eval(0.0) == pytest.approx(0.0, abs=1e-8)
        assert solution.eval(-0.5) == pytest.approx(-solution.eval(0.5), abs=1e-8)
        assert solution.max_residual <= 1e-5

    @pytest.mark.parametrize(("name", "theta0"), [("uniform_a", 0.0), ("student_nu", 5.0)])
    def test_named_full_support(self, name, theta0):
        """Test that the full support gives a zero named solution."""

        solution = solve_continuous(builtin(name), theta0, EventSet.full())
        f0 = solution.test_function()

        np.testing.assert_allclose(f0.eval(np.array([0.1, 0.5, 0.9])), np.zeros(3), atol=1e-12)
        assert solution.max_residual <= 1e-9

    def test_generic_fallback(self):
        """Test that the generic operator is solved with the parameter-integral solution."""

        grid = [-1.5, -0.5, 0.5, 1.5]
        solution = solve_continuous(builtin("gaussian_loc"), 0.0, "le:0", "generic", grid)
        f0 = solution.test_function()

        assert solution.flavor == OperatorFlavor.GENERIC
        assert solution.tolerance == THEOREM_RESIDUAL_TOL
        assert isinstance(f0.two_arg_form, TheoremSolution)
        assert solution.within_tolerance

    def test_full_support(self):
        """Test that the full support gives the zero solution."""

        solution = solve_continuous(builtin("gaussian_loc"), 0.0, EventSet.full())

        np.testing.assert_array_equal(solution.eval(np.linspace(-3.0, 3.0, 7)), np.zeros(7))
        assert solution.target_mass == 1.0
        assert solution.max_residual == 0.0

    def test_outside_support(self):
        """Test that solutions vanish outside the support."""

        solution = solve_continuous(builtin("exponential_scale"), 1.0, "le:1")

        assert solution.eval(-1.0) == 0.0

    @pytest.mark.parametrize(
        ("name", "event", "error"),
        [
            ("poisson_lambda", "le:0", ParameterError),
            ("gaussian_loc", "int:{0}", ParameterError),
            ("student_nu", "le:0", SolverError),
            ("student_nu", "interval:0,1", SolverError),
        ],
    )
    def test_invalid(self, name, event, error):
        """Test families and events without a continuous solution."""

        with pytest.raises(error):
            solve_continuous(builtin(name), None, event)

    def test_divergence(self):
        """Test that numeric failures are reported as solver errors."""

        with patch(
            "steinforge.solver.solutions.probability", side_effect=DivergenceError("no luck")
        ):
            with pytest.raises(SolverError):
                solve_continuous(builtin("gaussian_loc"), 0.0, "le:0")


class TestSolveDiscrete:
    """Test suite for solve_discrete."""

    def test_poisson(self):
        """Test f(1) = e^-1 (1 - e^-1) and the empty sum at 0."""

        solution = solve_discrete(builtin("poisson_lambda"), 1.0, "int:{0}")

        assert solution.eval(1) == pytest.approx(math.exp(-1.0) * (1.0 - math.exp(-1.0)), abs=1e-12)
        assert solution.eval(0) == 0.0
        assert solution.tolerance == DISCRETE_RESIDUAL_TOL

    def test_poisson_residuals(self):
        """Test the forward-difference residuals on 0..50."""

        solution = solve_discrete(builtin("poisson_lambda"), 1.0, "int:{0}")

        assert [x for x, _ in solution.residual_grid] == list(range(51))
        assert solution.max_residual <= 1e-10

    def test_geometric(self):
        """Test f(1) = (1 - 1/2) g(0) / psi(1) with psi(1) = -1."""

        solution = solve_discrete(builtin("geometric_p"), 0.5, EventSet.integers([0]))

        assert solution.eval(1) == pytest.approx(-0.25, abs=1e-12)
        assert solution.max_residual <= 1e-10

    @pytest.mark.parametrize("event", ["le:3", "interval:1,4", "int:{0,10}", "full"])
    def test_binomial(self, event):
        """Test finite supports, including their upper end."""

        solution = solve_discrete(builtin("binomial_p", [10]), 0.3, event)

        assert [x for x, _ in solution.residual_grid] == list(range(11))
        assert solution.max_residual <= 1e-10

    def test_outside_support(self):
        """Test that solutions vanish outside the support."""

        solution = solve_discrete(builtin("binomial_p", [3]), 0.5, "le:1")

        np.testing.assert_array_equal(solution.eval(np.array([-1.0, 4.0, 1.5])), np.zeros(3))

    def test_continuous_family(self):
        """Test that continuous families are rejected."""

        with pytest.raises(ParameterError):
            solve_discrete(builtin("gaussian_loc"), 0.0, "le:0")


class TestSolve:
    """Test suite for solve."""

    @pytest.mark.parametrize(
        ("name", "event", "flavor"),
        [("poisson_lambda", "int:{1}", "discrete"), ("gaussian_loc", "le:1", "location")],
    )
    def test_dispatch(self, name, event, flavor):
        """Test that the solver follows the measure of the family."""

        assert solve(builtin(name), None, event).flavor.value == flavor


class TestSteinSolution:
    """Test suite for SteinSolution."""

    def test_centered(self, gaussian_solution):
        """Test l_A = I_A - P(A)."""

        np.testing.assert_allclose(gaussian_solution.centered([-1.0, 1.0]), [0.5, -0.5])

    def test_location_test_function(self, gaussian_solution):
        """Test f0(t) = -E(t + mu0)."""

        f0 = gaussian_solution.test_function()

        assert f0.eval(0.4) == pytest.approx(-gaussian_solution.eval(0.4))

    def test_scale_test_function(self):
        """Test f0(t) = sigma0^2 E(t / sigma0) / t and its value at 0."""

        solution = solve_continuous(builtin("exponential_scale"), 2.0, "le:1")
        f0 = solution.test_function()

        assert f0.eval(1.0) == pytest.approx(4.0 * solution.eval(0.5))
        assert f0.eval(0.0) == pytest.approx(2.0 * (1.0 - solution.target_mass))

    def test_operator(self, gaussian_solution):
        """Test the operator solved for."""

        op = gaussian_solution.operator()

        assert op.flavor == OperatorFlavor.LOCATION
        assert op.theta0 == (0.0,)

    def test_to_rows(self, gaussian_solution):
        """Test the sampled table."""

        rows = gaussian_solution.to_rows()

        assert len(rows) == 200
        assert set(rows[0]) == {"x", "f_A", "residual"}
        assert rows[0]["f_A"] == pytest.approx(gaussian_solution.eval(rows[0]["x"]))

    def test_to_dict(self, gaussian_solution):
        """Test the summary."""

        summary = gaussian_solution.to_dict()

        assert summary["event"] == "le:0"
        assert summary["flavor"] == "location"
        assert summary["target_mass"] == pytest.approx(0.5)
        assert summary["within_tolerance"] is True

    def test_with_residuals(self, gaussian_solution):
        """Test a custom residual grid."""

        checked = gaussian_solution.with_residuals([0.5, 1.0])

        assert [x for x, _ in checked.residual_grid] == [0.5, 1.0]
        assert gaussian_solution.residual_grid != checked.residual_grid

    def test_residual_warning(self, gaussian_solution, caplog):
        """Test that a failed residual check is logged."""

        loose = SteinSolution(
            gaussian_solution.family,
            gaussian_solution.theta0,
            gaussian_solution.event,
            gaussian_solution.target_mass,
            OperatorFlavor.LOCATION,
            lambda x: np.zeros(np.shape(x)),
        )

        checked = loose.with_residuals([1.0])

        assert checked.max_residual == pytest.approx(0.5)
        assert not checked.within_tolerance
        assert "exceeds" in caplog.text


class TestResidual:
    """Test suite for residual and residual_values."""

    def test_explicit_operator(self, gaussian_solution):
        """Test an explicit operator and grid."""

        op = SteinOperator.create(builtin("gaussian_loc"), 0.0, "location")

        assert residual(gaussian_solution, op, [-0.5, 0.5, 2.0]) < 1e-6

    def test_empty_grid(self, gaussian_solution):
        """Test that an empty grid has no residual."""

        assert residual(gaussian_solution, grid=[]) == 0.0
        assert residual_values(gaussian_solution, grid=[]).size == 0

    @pytest.mark.parametrize(
        ("theta0", "flavor"), [(1.0, "location"), (0.0, "generic")]
    )
    def test_mismatched_operator(self, gaussian_solution, theta0, flavor):
        """Test that operators of another law or flavor are rejected."""

        op = SteinOperator.create(builtin("gaussian_loc"), theta0, flavor)

        with pytest.raises(ParameterError):
            residual(gaussian_solution, op)


class TestDefaultResidualGrid:
    """Test suite for default_residual_grid."""

    def test_poisson(self):
        """Test the first 51 support points."""

        np.testing.assert_array_equal(
            default_residual_grid(builtin("poisson_lambda"), 1.0), np.arange(51.0)
        )

    def test_finite_support(self):
        """Test that the upper end of a finite support is included."""

        grid = default_residual_grid(builtin("binomial_p", [60]), 0.5)

        assert grid[-1] == 60.0
        assert grid[-2] == 50.0
        assert len(grid) == 52

    def test_continuous(self):
        """Test 200 equispaced points between the extreme quantiles."""

        grid = default_residual_grid(builtin("gaussian_loc"), 0.0)

        assert len(grid) == 200
        assert grid[0] == pytest.approx(stats.norm.ppf(0.001))
        assert grid[-1] == pytest.approx(stats.norm.ppf(0.999))
