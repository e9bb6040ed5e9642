"""Unit tests for finite differences."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from steinforge.errors import EvaluationError
from steinforge.numerics import central_diff, forward_diff_int
from steinforge.numerics.differences import STEP_FACTOR, step_size


class TestCentralDiff:
    """Unit tests for central_diff."""

    def test_square(self):
        """Test the derivative of a square."""

        assert central_diff(lambda t: t * t, 3.0) == pytest.approx(6.0, abs=1e-7)

    def test_constant(self):
        """Test the derivative of a constant."""

        assert central_diff(lambda t: 4.2, -7.0) == 0.0

    def test_exponential(self):
        """Test the derivative of the exponential."""

        assert central_diff(math.exp, 1.0) == pytest.approx(math.e, abs=1e-6)

    def test_vector_valued(self):
        """Test componentwise differentiation of an array-valued function."""

        result = central_diff(lambda t: np.array([t, t * t]), 2.0)

        np.testing.assert_allclose(result, [1.0, 4.0], atol=1e-7)

    def test_nan(self):
        """Test that NaN values are reported."""

        with pytest.raises(EvaluationError):
            central_diff(lambda t: math.nan, 0.0)

    def test_step_size(self):
        """Test the step rule."""

        assert step_size(0.5) == STEP_FACTOR
        assert step_size(-4.0) == 4.0 * STEP_FACTOR
        assert step_size(1.0, scale=10.0) == 10.0 * STEP_FACTOR

    @given(
        a=st.floats(-10, 10),
        b=st.floats(-10, 10),
        c=st.floats(-10, 10),
        x=st.floats(-100, 100),
    )
    def test_quadratic_exact(self, a, b, c, x):
        """Test that quadratics are differentiated within a relative 1e-6."""

        derivative = central_diff(lambda t: a * t * t + b * t + c, x)

        assert derivative == pytest.approx(2 * a * x + b, rel=1e-6, abs=1e-6)


class TestForwardDiffInt:
    """Unit tests for forward_diff_int."""

    def test_square(self):
        """Test the forward difference of a square."""

        assert forward_diff_int(lambda j: j * j, 2) == 5

    def test_constant(self):
        """Test the forward difference of a constant."""

        assert forward_diff_int(lambda j: 3.0, 10) == 0

    def test_poisson_mass(self):
        """Test the forward difference of the Poisson(1) mass at 0."""

        def mass(j):
            return math.exp(-1.0) / math.factorial(j)

        assert forward_diff_int(mass, 0) == pytest.approx(0.0, abs=1e-15)

    def test_nan(self):
        """Test that NaN values are reported."""

        with pytest.raises(EvaluationError):
            forward_diff_int(lambda j: math.nan, 0)
