"""Unit tests for expectations of Stein operators."""

import math
from unittest.mock import patch

import numpy as np
import pytest

from steinforge.characterize import expectations
from steinforge.characterize import (
    coordinate_expectations,
    discrimination_curve,
    expectation_of_operator,
    is_conditional,
    shifted_theta,
)
from steinforge.errors import ConditioningError, DivergenceError, ParameterError
from steinforge.families import builtin
from steinforge.numerics import NumericReport
from steinforge.operators import SteinOperator
from steinforge.test_functions import constant, identity, semicircle_precompose


class TestExpectationOfOperator:
    """Test suite for expectation_of_operator."""

    @pytest.mark.parametrize(
        ("name", "theta0", "flavor"),
        [("gaussian_loc", 0.0, "location"), ("exponential_scale", 1.0, "scale")],
    )
    def test_identity(self, name, theta0, flavor):
        """Test E[T id] = 0 under the target."""

        family = builtin(name)
        op = SteinOperator.create(family, theta0, flavor)

        report = expectation_of_operator(family.at(theta0), op, identity())

        assert isinstance(report, NumericReport)
        assert report.value == pytest.approx(0.0, abs=1e-8)

    def test_semicircle(self):
        """Test E[(4 - X^2) f1'(X) - 3 X f1(X)] = 0 with f1 = id and sigma = 2."""

        family = builtin("semicircle_loc", {"sigma": 2.0})
        op = SteinOperator.create(family, 0.0, "location")

        report = expectation_of_operator(
            family.at(0.0), op, semicircle_precompose(identity(), 2.0)
        )

        assert report.value == pytest.approx(0.0, abs=1e-8)

    def test_exponential_boundary(self):
        """Test that -f(0+) balances E[T 1] = 1 for the exponential location family."""

        family = builtin("exponential_loc")
        op = SteinOperator.create(family, 0.0, "location")

        report = expectation_of_operator(family.at(0.0), op, constant())

        assert op.boundary(constant()) == pytest.approx(-1.0)
        assert report.value == pytest.approx(0.0, abs=1e-8)

    def test_uniform_boundary(self):
        """Test that f(b-) - f(a+) balances E[-f'(X)] for the uniform location family."""

        family = builtin("uniform_loc", {"a": 0.0, "b": 1.0})
        op = SteinOperator.create(family, 0.0, "location")

        report = expectation_of_operator(family.at(0.0), op, identity())

        assert report.value == pytest.approx(0.0, abs=1e-8)

    def test_discrete(self):
        """Test the sum of the discrete operator under its target."""

        family = builtin("poisson_lambda")
        op = SteinOperator.create(family, 1.0, "discrete")

        report = expectation_of_operator(family.at(1.0), op, identity())

        assert report.value == pytest.approx(0.0, abs=1e-9)

    def test_alternative(self):
        """Test E[T 1] = E[X] under N(0.5, 1) for the Gaussian location operator."""

        family = builtin("gaussian_loc")
        op = SteinOperator.create(family, 0.0, "location")

        report = expectation_of_operator(family.at(0.5), op, constant())

        assert report.value == pytest.approx(0.5, abs=1e-8)

    def test_conditional(self):
        """Test that a law leaking outside S_theta0 is conditioned on it."""

        family = builtin("exponential_loc")
        op = SteinOperator.create(family, 0.0, "location")

        report = expectation_of_operator(family.at(-0.5), op, constant())

        assert report.value == pytest.approx(0.0, abs=1e-8)

    def test_mixed_measures(self):
        """Test that a discrete law cannot be plugged into a continuous operator."""

        op = SteinOperator.create(builtin("gaussian_loc"), 0.0, "location")

        with pytest.raises(ParameterError):
            expectation_of_operator(builtin("poisson_lambda").at(1.0), op, constant())

    def test_disjoint_supports(self):
        """Test that a law without mass on S_theta0 is rejected."""

        family = builtin("uniform_loc", {"a": 0.0, "b": 1.0})
        op = SteinOperator.create(family, 0.0, "location")

        with pytest.raises(ConditioningError):
            expectation_of_operator(family.at(5.0), op, constant())

    def test_divergence(self):
        """Test that divergence keeps the partial value."""

        family = builtin("gaussian_loc")
        op = SteinOperator.create(family, 0.0, "location")
        partial = NumericReport(0.25, 1.0, 10)

        with patch.object(
            expectations, "integrate",
            side_effect=DivergenceError("stuck", partial=partial),
        ):
            with pytest.raises(DivergenceError) as error:
                expectation_of_operator(family.at(0.0), op, identity())

        assert error.value.partial is partial


class TestIsConditional:
    """Test suite for is_conditional."""

    @pytest.mark.parametrize(("theta", "expected"), [(0.0, False), (0.5, False), (-0.5, True)])
    def test_moving_support(self, theta, expected):
        """Test supports contained in S_theta0 or not."""

        family = builtin("exponential_loc")
        op = SteinOperator.create(family, 0.0, "location")

        assert is_conditional(family.at(theta), op) is expected


class TestShiftedTheta:
    """Test suite for shifted_theta."""

    def test_shift(self, two_parameter_gaussian):
        """Test that one coordinate is shifted."""

        assert shifted_theta(two_parameter_gaussian, (0.0, 1.0), 0.5, 1) == (0.0, 1.5)

    @pytest.mark.parametrize(("delta", "coordinate"), [(-2.0, 0), (0.1, 1)])
    def test_invalid(self, delta, coordinate):
        """Test parameters leaving the parameter space and unknown coordinates."""

        with pytest.raises(ParameterError):
            shifted_theta(builtin("poisson_lambda"), 1.0, delta, coordinate)


class TestDiscriminationCurve:
    """Test suite for discrimination_curve."""

    def test_gaussian_identity_map(self):
        """Test that delta -> E[X] under N(delta, 1) is the identity."""

        deltas = [-0.5, 0.0, 0.1, 1.0]

        curve = discrimination_curve(builtin("gaussian_loc"), 0.0, "location", constant(), deltas)

        assert [point.delta for point in curve] == deltas
        np.testing.assert_allclose([point.expectation for point in curve], deltas, atol=1e-8)

    def test_poisson(self):
        """Test e (1 - 1.1) for the Poisson operator applied to 1 under Poisson(1.1)."""

        curve = discrimination_curve(builtin("poisson_lambda"), 1.0, None, constant(), [0.1])

        assert curve[0].expectation == pytest.approx(-0.1 * math.e, abs=1e-9)

    def test_invalid_delta(self, caplog):
        """Test that invalid shifts are recorded, not raised."""

        curve = discrimination_curve(builtin("poisson_lambda"), 1.0, None, constant(), [-2.0, 0.0])

        assert math.isnan(curve[0].expectation)
        assert curve[0].message
        assert curve[1].expectation == pytest.approx(0.0, abs=1e-9)
        assert "No expectation" in caplog.text

    def test_to_dict(self):
        """Test the JSON representation of a point."""

        curve = discrimination_curve(builtin("gaussian_loc"), 0.0, None, constant(), [0.0])

        assert set(curve[0].to_dict()) == {"delta", "expectation", "abs_error", "message"}


class TestCoordinateExpectations:
    """Test suite for coordinate_expectations."""

    def test_each_coordinate_vanishes(self, two_parameter_gaussian):
        """Test that every coordinate of the vector operator has zero expectation."""

        op = SteinOperator.create(two_parameter_gaussian, (0.0, 1.0), "generic")

        values = coordinate_expectations(two_parameter_gaussian.at((0.0, 1.0)), op, constant())

        assert values.shape == (2,)
        np.testing.assert_allclose(values, [0.0, 0.0], atol=1e-6)

    def test_named_operator(self):
        """Test that coordinatewise expectations need a generic operator."""

        family = builtin("gaussian_loc")
        op = SteinOperator.create(family, 0.0, "location")

        with pytest.raises(ParameterError):
            coordinate_expectations(family.at(0.0), op, constant())
