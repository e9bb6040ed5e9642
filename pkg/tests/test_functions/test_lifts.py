"""Unit tests for the two-argument lifts."""

import math

import numpy as np
import pytest

from steinforge.errors import ParameterError
from steinforge.families import (
    FamilyKind,
    OperatorFlavor,
    ParametricFamily,
    ParamSpace,
    builtin,
)
from steinforge.numerics import Interval, central_diff
from steinforge.test_functions import (
    check_flavor,
    constant,
    identity,
    lift,
    semicircle_precompose,
    with_lift,
)


@pytest.fixture
def exponential_rate() -> ParametricFamily:
    """Provide an exponential family parametrized by its rate, as a shape family."""
    return ParametricFamily(
        name="exponential_rate",
        kind=FamilyKind.CONTINUOUS,
        param_space=ParamSpace((Interval(0.0, math.inf),)),
        pdf=lambda x, theta: theta[0] * np.exp(-theta[0] * np.asarray(x, dtype=float)),
        support_fn=lambda theta: Interval(0.0, math.inf),
        default_theta=(1.0,),
        param_names=("rate",),
    )


class TestCheckFlavor:
    """Test suite for check_flavor."""

    @pytest.mark.parametrize(
        ("name", "flavor"),
        [
            ("gaussian_loc", "location"),
            ("gaussian_loc", "generic"),
            ("gaussian_scale", "scale"),
            ("poisson_lambda", "discrete"),
            ("uniform_a", "named"),
            ("student_nu", "named"),
            ("multinomial_p1_slice", "named"),
        ],
    )
    def test_compatible(self, name, flavor):
        """Test flavors that fit their family."""

        assert check_flavor(builtin(name), flavor) == OperatorFlavor(flavor)

    @pytest.mark.parametrize(
        ("name", "flavor"),
        [
            ("poisson_lambda", "location"),
            ("gaussian_loc", "discrete"),
            ("gaussian_loc", "named"),
            ("gaussian_scale", "location"),
            ("exponential_loc", "scale"),
            ("gaussian_loc", "spline"),
        ],
    )
    def test_incompatible(self, name, flavor):
        """Test flavors that do not fit their family."""

        with pytest.raises(ParameterError):
            check_flavor(builtin(name), flavor)


class TestLift:
    """Test suite for lift."""

    def test_location(self):
        """Test the location form f0(x - mu)."""

        form = lift(identity(), builtin("gaussian_loc"), "location")

        assert float(form(2.0, (0.5,))) == 1.5

    def test_scale(self):
        """Test the scale form f0(sigma x)."""

        form = lift(identity(), builtin("gaussian_scale"), OperatorFlavor.SCALE)

        assert float(form(2.0, (3.0,))) == 6.0

    def test_discrete(self):
        """Test the discrete form for Poisson with f0 = 1."""

        form = lift(constant(), builtin("poisson_lambda"), "discrete")

        # (g(2) - g(1)) / (g(1) g(0)) at lambda = 1
        assert float(form(1.0, (1.0,))) == pytest.approx(-0.5 * math.e)

    @pytest.mark.parametrize(("a", "expected"), [(0.0, 0.5), (-1.0, 0.75)])
    def test_uniform_endpoint(self, a, expected):
        """Test the named form f0((x - a) / (b - a))."""

        form = lift(identity(), builtin("uniform_a"), "named")

        assert float(form(0.5, (a,))) == pytest.approx(expected)

    def test_student(self):
        """Test the named Student form at x = 0."""

        form = lift(constant(), builtin("student_nu"), "named")

        assert float(form(0.0, (3.0,))) == pytest.approx(
            math.gamma(1.5) / math.gamma(2.0), rel=1e-12
        )

    def test_generic_uses_own_form(self):
        """Test that the generic flavor keeps an explicit two-argument form."""

        f = identity().with_two_arg_form(lambda x, theta: 10 * theta[0])
        form = lift(f, builtin("gaussian_loc"), "generic")

        assert form(0.0, (0.5,)) == 5.0

    @pytest.mark.parametrize(
        ("name", "x", "theta", "expected"),
        [
            ("gaussian_loc", 2.0, (0.5,), 1.5),
            ("gaussian_scale", 2.0, (3.0,), 6.0),
            ("uniform_a", 0.5, (-1.0,), 0.75),
        ],
    )
    def test_generic_natural_form(self, name, x, theta, expected):
        """Test that the generic flavor falls back to the family's natural form."""

        form = lift(identity(), builtin(name), "generic")

        assert float(form(x, theta)) == pytest.approx(expected)

    def test_generic_shape_family(self, exponential_rate):
        """Test the parameter-free form of shape families without a named form."""

        form = lift(identity(), exponential_rate, "generic")

        assert float(form(2.0, (5.0,))) == 2.0

    def test_with_lift(self):
        """Test that with_lift attaches the form."""

        f = with_lift(identity(), builtin("gaussian_loc"), "location")

        assert float(f.two_arg_form(2.0, (0.5,))) == 1.5


class TestSemicirclePrecompose:
    """Test suite for semicircle_precompose."""

    def test_linear_weight(self):
        """Test f1(t) (sigma^2 - t^2) and its derivative."""

        f0 = semicircle_precompose(identity(), 2.0)

        assert (f0.eval(1.0), f0.derivative(1.0)) == (3.0, 1.0)
        assert f0.eval(2.0) == 0.0

    def test_fractional_exponent(self):
        """Test the derivative of a fractional power against a central difference."""

        f0 = semicircle_precompose(identity(), 2.0, r=1.5)

        assert f0.eval(0.5) == pytest.approx(0.5 * 3.75**1.5)
        assert f0.derivative(0.5) == pytest.approx(
            central_diff(lambda t: float(f0.eval(t)), 0.5), rel=1e-7
        )

    @pytest.mark.parametrize(("sigma", "r"), [(2.0, 0.5), (0.0, 1.0), (-1.0, 1.0)])
    def test_invalid(self, sigma, r):
        """Test that the radius must be positive and the exponent above 1/2."""

        with pytest.raises(ValueError):
            semicircle_precompose(identity(), sigma, r)
