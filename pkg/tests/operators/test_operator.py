"""Unit tests for the Stein operator record and the apply functions."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from steinforge.errors import (
    BoundaryError,
    CatalogError,
    DegenerateDensityError,
    ParameterError,
)
from steinforge.families import OperatorFlavor, builtin
from steinforge.operators import (
    SteinOperator,
    discrete_apply,
    generic_apply,
    location_apply,
    named_apply,
    scale_apply,
)
from steinforge.test_functions import (
    TestFunction,
    constant,
    identity,
    polynomial_battery,
    semicircle_precompose,
)


class TestSteinOperator:
    """Test suite for SteinOperator."""

    def test_create_defaults(self):
        """Test that the family's theta0 and default flavor are used."""

        op = SteinOperator.create(builtin("poisson_lambda"))

        assert op.flavor == OperatorFlavor.DISCRETE
        assert op.theta0 == (1.0,)
        assert op.closed_form is not None

    @pytest.mark.parametrize(
        ("name", "theta0", "flavor", "coordinate"),
        [
            ("gaussian_loc", math.inf, "location", 0),
            ("poisson_lambda", 1.0, "location", 0),
            ("gaussian_loc", 0.0, "location", 1),
            ("gaussian_loc", 0.0, "spline", 0),
        ],
    )
    def test_create_invalid(self, name, theta0, flavor, coordinate):
        """Test invalid parameters, flavors and coordinates."""

        with pytest.raises(ParameterError):
            SteinOperator.create(builtin(name), theta0, flavor, coordinate)

    def test_call(self):
        """Test that calling the operator evaluates it."""

        op = SteinOperator.create(builtin("gaussian_loc"), 0.0, "location")

        assert op(identity(), 2.0) == 3.0
        np.testing.assert_allclose(op(identity(), np.array([0.0, 1.0])), [-1.0, 0.0])

    def test_vector(self):
        """Test the vector evaluation keeps a trailing coordinate axis."""

        op = SteinOperator.create(builtin("gaussian_loc"), 0.0, "generic")

        values = op.vector(identity(), np.array([1.0, 2.0]))

        assert values.shape == (2, 1)
        np.testing.assert_allclose(values[:, 0], [0.0, 3.0], atol=1e-6)

    def test_text(self):
        """Test the printed and the general plain-text forms."""

        assert "exp(lambda0)" in SteinOperator.create(builtin("poisson_lambda")).text
        assert SteinOperator.create(builtin("gaussian_loc"), 0.0, "generic").text.startswith(
            "grad_theta"
        )

    def test_to_dict(self):
        """Test the JSON descriptor."""

        op = SteinOperator.create(builtin("poisson_lambda"), 1.5, "discrete")

        assert op.to_dict() == {
            "family": "poisson_lambda",
            "flavor": "discrete",
            "theta0": [1.5],
            "coordinate": 0,
        }

    def test_from_dict(self):
        """Test that a descriptor rebuilds the operator."""

        op = SteinOperator.from_dict(
            {"family": "gaussian_loc", "flavor": "generic", "theta0": [0.5], "coordinates": [0]}
        )

        assert op.flavor == OperatorFlavor.GENERIC
        assert op.theta0 == (0.5,)
        assert op.coordinates == (0,)

    def test_from_dict_registered(self, registered_laplace):
        """Test that registered families are resolved by name."""

        op = SteinOperator.from_dict({"family": "laplace_loc"})

        assert op.family is registered_laplace
        assert op.flavor == OperatorFlavor.LOCATION

    def test_from_dict_invalid(self):
        """Test descriptors without a family or with an unknown one."""

        with pytest.raises(ParameterError):
            SteinOperator.from_dict({"flavor": "location"})
        with pytest.raises(CatalogError):
            SteinOperator.from_dict({"family": "cauchy"})

    def test_str(self):
        """Test the string representation."""

        op = SteinOperator.create(builtin("gaussian_loc"), 0.0, "location")

        assert str(op) == "T[location](gaussian_loc(sigma=1.0); theta0=(0))"


class TestGenericApply:
    """Test suite for generic_apply."""

    def test_gaussian_location(self):
        """Test the location form f0(x - mu) with f0 = x."""

        np.testing.assert_allclose(
            generic_apply(builtin("gaussian_loc"), 0.0, identity(), 2.0), [3.0], atol=1e-6
        )

    def test_zero_form(self):
        """Test that the zero form gives 0."""

        values = generic_apply(
            builtin("exponential_scale"), 1.0, lambda x, theta: np.zeros_like(x), 2.0
        )

        np.testing.assert_allclose(values, [0.0])

    def test_poisson_two_argument_form(self):
        """Test an explicit two-argument form of the Poisson family."""

        def form(x, theta):
            lam = theta[0]
            return math.exp(lam) * (lam * (x + 1) / (x + 1) - x)

        np.testing.assert_allclose(
            generic_apply(builtin("poisson_lambda"), 1.0, form, 2.0), [-math.e], atol=1e-6
        )

    def test_outside_support(self):
        """Test that the operator vanishes exactly outside the support."""

        values = generic_apply(builtin("exponential_scale"), 1.0, identity(), -1.0)

        assert values.tolist() == [0.0]

    def test_degenerate_density(self, bump_family):
        """Test that a density vanishing inside its support raises an error."""

        with pytest.raises(DegenerateDensityError):
            generic_apply(bump_family, 0.0, identity(), np.array([0.5, 0.0]))

    def test_sub_vector(self, two_parameter_gaussian):
        """Test that each coordinate of a two-parameter operator can be kept alone."""

        f = identity().with_two_arg_form(lambda x, theta: np.asarray(x) - theta[0])
        full = generic_apply(two_parameter_gaussian, (0.0, 1.0), f, 1.5)
        second = generic_apply(two_parameter_gaussian, (0.0, 1.0), f, 1.5, coordinates=[1])

        assert full.shape == (2,)
        # d/dmu: -1 + (x - mu)^2, d/dsigma: (x - mu) ((x - mu)^2 - 1)
        np.testing.assert_allclose(full, [1.25, 1.875], atol=1e-6)
        np.testing.assert_allclose(second, [1.875], atol=1e-6)


class TestLocationApply:
    """Test suite for location_apply."""

    def test_gaussian(self):
        """Test -f0'(x) + x f0(x) at x = 2."""

        assert location_apply(builtin("gaussian_loc"), 0.0, identity(), 2.0) == 3.0

    def test_exponential_interior(self):
        """Test -(f0' - f0) inside the support."""

        assert location_apply(builtin("exponential_loc"), 0.0, identity(), 1.0) == 0.0

    def test_semicircle(self):
        """Test the pre-composed semicircle form at x = 1."""

        f0 = semicircle_precompose(identity(), 2.0)

        assert location_apply(builtin("semicircle_loc"), 0.0, f0, 1.0) == pytest.approx(
            0.0, abs=1e-12
        )

    def test_semicircle_endpoint(self):
        """Test that the singular endpoint raises a boundary error."""

        f0 = semicircle_precompose(identity(), 2.0)

        with pytest.raises(BoundaryError):
            location_apply(builtin("semicircle_loc"), 0.0, f0, 2.0)

    def test_outside_support(self):
        """Test that the operator vanishes outside the support."""

        assert location_apply(builtin("exponential_loc"), 0.0, identity(), -1.0) == 0.0

    def test_numeric_score(self, laplace_family):
        """Test a family without an analytic spatial score."""

        # -(1 + 2 * (-1))
        assert location_apply(laplace_family, 0.0, identity(), 2.0) == pytest.approx(
            1.0, abs=1e-7
        )


class TestScaleApply:
    """Test suite for scale_apply."""

    def test_gaussian(self):
        """Test x f0'(x) + (1 - x^2) f0(x) at x = 2."""

        assert scale_apply(builtin("gaussian_scale"), 1.0, identity(), 2.0) == -4.0

    def test_exponential(self):
        """Test x f0'(x) - (x - 1) f0(x) with f0 = 1."""

        assert scale_apply(builtin("exponential_scale"), 1.0, constant(), 3.0) == -2.0

    def test_zero(self):
        """Test that f0 = 0 gives 0."""

        assert scale_apply(builtin("gaussian_scale"), 2.0, constant(0.0), 1.5) == 0.0


class TestDiscreteApply:
    """Test suite for discrete_apply."""

    def test_poisson(self):
        """Test exp(lambda) (f0(x+1) - x f0(x) / lambda) at x = 1."""

        assert discrete_apply(builtin("poisson_lambda"), 1.0, identity(), 1) == pytest.approx(
            math.e, rel=1e-12
        )

    def test_geometric(self):
        """Test the geometric operator at x = 0."""

        assert discrete_apply(builtin("geometric_p"), 0.5, constant(), 0) == pytest.approx(
            -2.0, rel=1e-12
        )

    def test_binomial_top(self):
        """Test the binomial operator at the top of its support."""

        assert discrete_apply(builtin("binomial_p", [2]), 0.5, constant(), 2) == pytest.approx(
            -32.0, rel=1e-12
        )

    def test_outside_support(self):
        """Test that the operator vanishes outside the support."""

        values = discrete_apply(builtin("binomial_p", [2]), 0.5, constant(), np.array([-1, 3]))

        assert values.tolist() == [0.0, 0.0]

    def test_numeric_score(self, binomial_without_cdf):
        """Test a family without an analytic score against the closed binomial form."""

        # (1 - p)^-6 ((4 - x) - ((1 - p) / p) x) at p = 0.3, x = 1
        expected = 0.7**-6 * (3.0 - 0.7 / 0.3)

        assert discrete_apply(binomial_without_cdf, 0.3, constant(), 1) == pytest.approx(
            expected, rel=1e-7
        )


class TestNamedApply:
    """Test suite for named_apply."""

    def test_uniform_endpoint(self):
        """Test the endpoint operator with its boundary constant."""

        assert named_apply("uniform_a", {"a": 0.0, "b": 1.0}, identity(), 0.5) == 0.0

    def test_student(self):
        """Test the Student operator at x = 0."""

        value = named_apply("student_nu", {"nu": 3.0}, constant(), 0.0)

        assert value == pytest.approx(-math.gamma(1.5) / 6.0, rel=1e-12)
        assert value == pytest.approx(-0.1477, abs=1e-3)

    def test_multinomial_vanishing_bracket(self):
        """Test the multinomial slice where both bracket terms cancel."""

        params = {"n": 10, "p_rest": [0.3], "x_rest": [4], "p1": 0.35}

        assert named_apply("multinomial_p1_slice", params, constant(), 3) == pytest.approx(
            0.0, abs=1e-9
        )

    def test_uniform_location(self):
        """Test that the uniform location operator is f0'(x - mu)."""

        f0 = TestFunction(lambda x: x * x, lambda x: 2 * x, label="x^2")

        assert named_apply("uniform_loc", {"mu": 1.0}, f0, 1.5) == 1.0

    def test_default_parameter(self):
        """Test that a missing parameter of interest takes the default theta0."""

        assert named_apply("student_nu", None, constant(), 0.0) == pytest.approx(
            named_apply("student_nu", {"nu": 5.0}, constant(), 0.0)
        )

    @pytest.mark.parametrize(
        ("name", "params"),
        [
            ("gaussian_loc", None),
            ("uniform_a", {"a": 2.0, "b": 1.0}),
            ("uniform_a", {"c": 1.0}),
        ],
    )
    def test_invalid(self, name, params):
        """Test families without a named operator and invalid parameters."""

        with pytest.raises(ParameterError):
            named_apply(name, params, identity(), 0.5)


class TestBoundary:
    """Test suite for SteinOperator.boundary."""

    def test_exponential_location(self):
        """Test the boundary term -rate f0(0+) of the exponential location operator."""

        op = SteinOperator.create(builtin("exponential_loc"), 0.0, "location")

        assert op.boundary(constant()) == -1.0

    def test_alternative_without_mass(self):
        """Test that an alternative without mass at the endpoint has no boundary term."""

        family = builtin("exponential_loc")
        op = SteinOperator.create(family, 0.0, "location")

        assert op.boundary(constant(), family.at(0.5)) == 0.0

    def test_uniform_location(self):
        """Test the boundary f0(b-) - f0(a+) of the uniform location operator."""

        op = SteinOperator.create(builtin("uniform_loc"), 0.0, "location")

        assert op.boundary(identity()) == pytest.approx(1.0)

    def test_uniform_location_named(self):
        """Test the generic boundary of the named uniform location operator."""

        op = SteinOperator.create(builtin("uniform_loc"), 0.0, "named")

        assert op.boundary(identity()) == pytest.approx(-1.0)

    def test_included_boundary(self):
        """Test that the uniform endpoint operator already carries its boundary term."""

        op = SteinOperator.create(builtin("uniform_a"), 0.0, "named")

        assert op.boundary(identity()) == 0.0

    @pytest.mark.parametrize(
        ("name", "flavor"),
        [
            ("exponential_scale", "scale"),
            ("poisson_lambda", "discrete"),
            ("gaussian_loc", "location"),
        ],
    )
    def test_no_boundary(self, name, flavor):
        """Test operators without moving finite endpoints."""

        op = SteinOperator.create(builtin(name), None, flavor)

        assert op.boundary(identity()) == 0.0


class TestLinearity:
    """Test suite for the linearity of the operators."""

    @settings(max_examples=25, deadline=None)
    @given(
        alpha=st.floats(min_value=-10, max_value=10),
        beta=st.floats(min_value=-10, max_value=10),
    )
    @pytest.mark.parametrize(
        ("name", "flavor", "x"),
        [
            ("gaussian_loc", "location", np.linspace(-3, 3, 7)),
            ("exponential_scale", "scale", np.linspace(0.5, 3, 6)),
            ("poisson_lambda", "discrete", np.arange(6.0)),
            ("student_nu", "named", np.linspace(-3, 3, 7)),
        ],
    )
    def test_linear_combination(self, name, flavor, x, alpha, beta):
        """Test T(alpha f + beta g) = alpha T f + beta T g."""

        f, g = polynomial_battery(2, "gaussian")[1:]
        op = SteinOperator.create(builtin(name), None, flavor)

        combined = op(f * alpha + g * beta, x)
        expected = alpha * op(f, x) + beta * op(g, x)

        np.testing.assert_allclose(combined, expected, rtol=1e-12, atol=1e-12)
