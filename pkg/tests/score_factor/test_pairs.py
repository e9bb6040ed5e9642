"""Unit tests for score pairs and the generalized score."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from steinforge.errors import ParameterError, SupportError
from steinforge.families import builtin, location_family
from steinforge.score_factor import (
    ScorePair,
    common_support_pair,
    generalized_score,
    location_pair,
    score_rows,
)

LAPLACE = location_family("laplace_loc", lambda t: 0.5 * np.exp(-np.abs(t)))
LOGISTIC = location_family("logistic_loc", lambda t: np.exp(-t) / (1.0 + np.exp(-t)) ** 2)


class TestScorePair:
    """Test suite for ScorePair."""

    def test_create(self):
        """Test a pair built from catalog names."""

        pair = ScorePair.create("gaussian_loc", LAPLACE, 0.5)

        assert pair.theta0 == (0.5,)
        assert pair.p.name == "gaussian_loc"
        assert pair.q is LAPLACE
        assert pair.to_dict() == {"p": pair.p.label, "q": LAPLACE.label, "theta0": [0.5]}

    def test_support_mismatch(self):
        """Test that the supports must agree at theta0."""

        with pytest.raises(SupportError):
            ScorePair.create("gaussian_loc", "exponential_loc", 0.0)

    @pytest.mark.parametrize("q", ["poisson_lambda", "gaussian_scale"])
    def test_kind_or_parameter(self, q):
        """Test mixed measures and parameters invalid for one of the families."""

        with pytest.raises(ParameterError):
            ScorePair.create("gaussian_loc", q, -1.0)

    def test_dimension_mismatch(self, two_parameter_gaussian):
        """Test that both families need the same number of parameters."""

        with pytest.raises(ParameterError):
            ScorePair.create(two_parameter_gaussian, "gaussian_loc")

    def test_swap(self):
        """Test the reversed pair."""

        pair = location_pair("gaussian_loc", LAPLACE).swap()

        assert pair.p is LAPLACE
        assert pair.q.name == "gaussian_loc"


class TestLocationPair:
    """Test suite for location_pair."""

    def test_scale_family(self):
        """Test that both families must be location families."""

        with pytest.raises(ParameterError):
            location_pair("gaussian_loc", "gaussian_scale")


class TestCommonSupportPair:
    """Test suite for common_support_pair."""

    def test_half_gaussian_and_exponential(self):
        """Test the restriction of the Gaussian scale family to the positive half-line."""

        pair = common_support_pair("gaussian_scale", "exponential_scale", 1.0)

        assert pair.p.name.startswith("gaussian_scale|")
        assert pair.q.name == "exponential_scale"
        assert pair.support.lo == 0.0

    @pytest.mark.parametrize(("x", "expected"), [(1.0, 0.0), (2.0, -2.0), (0.5, 0.25)])
    def test_score(self, x, expected):
        """Test (1 - x^2) - (1 - x) at sigma = 1."""

        pair = common_support_pair("gaussian_scale", "exponential_scale", 1.0)

        np.testing.assert_allclose(generalized_score(pair, x), [expected], atol=1e-6)

    def test_disjoint(self):
        """Test supports without overlap."""

        with pytest.raises(SupportError):
            common_support_pair(
                builtin("uniform_loc", {"a": 0.0, "b": 1.0}),
                builtin("uniform_loc", {"a": 2.0, "b": 3.0}),
                0.0,
            )

    def test_discrete(self):
        """Test that discrete families are not restricted."""

        with pytest.raises(ParameterError):
            common_support_pair("poisson_lambda", "geometric_p")


class TestGeneralizedScore:
    """Test suite for generalized_score."""

    def test_gaussian_laplace(self):
        """Test x - sign(x) at x = 2."""

        pair = location_pair("gaussian_loc", LAPLACE)

        np.testing.assert_allclose(generalized_score(pair, 2.0), [1.0], atol=1e-8)

    def test_symmetric_point(self):
        """Test that both scores vanish at the center of symmetry."""

        pair = location_pair("gaussian_loc", LAPLACE)

        np.testing.assert_allclose(generalized_score(pair, 0.0), [0.0], atol=1e-12)

    @pytest.mark.parametrize("x", [-3.0, 0.0, 0.7, 4.0])
    def test_same_family(self, x):
        """Test that a family has no score against itself."""

        pair = location_pair("gaussian_loc", "gaussian_loc", 0.3)

        assert generalized_score(pair, x).tolist() == [0.0]

    def test_outside_support(self):
        """Test points outside the common support."""

        pair = common_support_pair("gaussian_scale", "exponential_scale", 1.0)

        with pytest.raises(SupportError):
            generalized_score(pair, -1.0)

    @settings(max_examples=50, deadline=None)
    @given(st.floats(min_value=-6.0, max_value=6.0))
    def test_antisymmetry(self, x):
        """Test r(p, q) = -r(q, p) exactly."""

        pair = location_pair("gaussian_loc", LAPLACE)

        assert generalized_score(pair, x).tolist() == (-generalized_score(pair.swap(), x)).tolist()

    @settings(max_examples=50, deadline=None)
    @given(st.floats(min_value=-6.0, max_value=6.0))
    def test_cocycle(self, x):
        """Test r(p, q) + r(q, s) = r(p, s)."""

        first = generalized_score(location_pair("gaussian_loc", LAPLACE), x)
        second = generalized_score(location_pair(LAPLACE, LOGISTIC), x)
        total = generalized_score(location_pair("gaussian_loc", LOGISTIC), x)

        np.testing.assert_allclose(first + second, total, rtol=0.0, atol=1e-10)


class TestScoreRows:
    """Test suite for score_rows."""

    def test_rows(self):
        """Test the table of generalized scores."""

        rows = score_rows(location_pair("gaussian_loc", LAPLACE), [-2.0, 2.0])

        assert [row["x"] for row in rows] == [-2.0, 2.0]
        assert rows[0]["r0"] == pytest.approx(-1.0, abs=1e-8)
        assert rows[1]["r0"] == pytest.approx(1.0, abs=1e-8)
