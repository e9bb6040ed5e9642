"""Unit tests for the necessity and sufficiency checks."""

import math
from unittest.mock import patch

import pytest
from scipy import stats

from steinforge.characterize import engine
from steinforge.characterize import (
    EntryStatus,
    ReportVerdict,
    characterize,
    default_events,
    discrimination_predicate,
    verify_necessity,
    verify_sufficiency,
)
from steinforge.errors import DivergenceError, ParameterError
from steinforge.families import Assumption, AssumptionReport, Verdict, builtin
from steinforge.numerics import NumericReport
from steinforge.solver import EventSet
from steinforge.test_functions import (
    ConditionReport,
    constant,
    identity,
    polynomial_battery,
)


class TestVerifyNecessity:
    """Test suite for verify_necessity."""

    def test_gaussian_location(self):
        """Test E[f'(X) - X f(X)] = 0 for the identity."""

        report = verify_necessity(builtin("gaussian_loc"), 0.0, battery=[identity()], check=False)

        assert report.verdict == ReportVerdict.CHARACTERIZED
        assert report.necessity[0].status == EntryStatus.ZERO
        assert report.necessity[0].expectation == pytest.approx(0.0, abs=1e-8)

    def test_gaussian_scale(self):
        """Test E[X f0'(X) + (1 - X^2) f0(X)] = 0 for the damped cubic polynomials."""

        report = verify_necessity(
            builtin("gaussian_scale"), 1.0, "scale", polynomial_battery(3, "gaussian"), False
        )

        assert len(report.necessity) == 4
        assert all(abs(entry.expectation) <= 1e-8 for entry in report.necessity)

    def test_binomial(self):
        """Test the exact finite sums for {1, x, x^2}."""

        report = verify_necessity(
            builtin("binomial_p", [10]), 0.3, "discrete", polynomial_battery(2), False
        )

        assert [entry.label for entry in report.necessity] == ["1", "x", "x^2"]
        assert all(abs(entry.expectation) <= 1e-10 for entry in report.necessity)

    def test_label_order(self):
        """Test that the entries are sorted by label."""

        battery = [identity(), constant()]

        report = verify_necessity(builtin("gaussian_loc"), 0.0, battery=battery, check=False)

        assert [entry.label for entry in report.necessity] == ["1", "x"]

    def test_default_battery(self):
        """Test the default battery, weighted for the semicircle family."""

        report = verify_necessity(builtin("semicircle_loc"), check=False)

        assert len(report.necessity) == 4
        assert all(entry.label.startswith("w*") for entry in report.necessity)
        assert all(abs(entry.expectation) <= 1e-8 for entry in report.necessity)

    def test_conditions(self):
        """Test that the admissibility checks are attached to the entries."""

        report = verify_necessity(builtin("gaussian_loc"), 0.0, battery=[identity()])

        assert [condition.condition for condition in report.conditions] == [
            "mu-i",
            "mu-ii",
            "mu-iii",
        ]
        assert report.verdict == ReportVerdict.CHARACTERIZED

    def test_exclusion(self, caplog):
        """Test that members failing a condition are excluded, leaving an inconclusive report."""

        failure = ConditionReport("mu-i", Verdict.FAIL, None, 1.0, message="drift")

        with patch.object(
            engine, "check_conditions", return_value=[failure]
        ) as checker:
            report = verify_necessity(builtin("gaussian_loc"), 0.0, battery=[identity()])

        checker.assert_called_once()
        assert report.excluded == ["x"]
        assert report.necessity[0].status == EntryStatus.EXCLUDED
        assert report.verdict == ReportVerdict.INCONCLUSIVE
        assert "Excluding x" in caplog.text

    def test_nonzero(self):
        """Test that a nonzero expectation violates the identity."""

        with patch.object(
            engine, "expectation_of_operator",
            return_value=NumericReport(0.5, 1e-12, 10),
        ):
            report = verify_necessity(
                builtin("gaussian_loc"), 0.0, battery=[identity()], check=False
            )

        assert report.necessity[0].status == EntryStatus.NONZERO
        assert report.verdict == ReportVerdict.VIOLATED

    def test_noisy_expectation(self):
        """Test that gaps below ten times the error estimate are not violations."""

        with patch.object(
            engine, "expectation_of_operator",
            return_value=NumericReport(5e-5, 1e-5, 10),
        ):
            report = verify_necessity(
                builtin("gaussian_loc"), 0.0, battery=[identity()], check=False
            )

        assert report.verdict == ReportVerdict.CHARACTERIZED

    def test_numeric_failure(self):
        """Test that a failed expectation is recorded as an error."""

        with patch.object(
            engine, "expectation_of_operator",
            side_effect=DivergenceError("stuck"),
        ):
            report = verify_necessity(
                builtin("gaussian_loc"), 0.0, battery=[identity(), constant()], check=False
            )

        assert [entry.status for entry in report.necessity] == [EntryStatus.ERROR] * 2
        assert report.necessity[0].message == "stuck"
        assert report.verdict == ReportVerdict.INCONCLUSIVE

    def test_empty_battery(self):
        """Test that a battery must not be empty."""

        with pytest.raises(ParameterError):
            verify_necessity(builtin("gaussian_loc"), 0.0, battery=[])

    def test_note(self):
        """Test that the report states the limits of a finite battery."""

        report = verify_necessity(builtin("gaussian_loc"), 0.0, battery=[identity()], check=False)

        assert any("finite battery" in note for note in report.notes)


class TestVerifySufficiency:
    """Test suite for verify_sufficiency."""

    def test_gaussian_shift(self):
        """Test E_alt[T f_A] = Phi(-0.5) - Phi(0) under N(0.5, 1) for A = (-inf, 0]."""

        family = builtin("gaussian_loc")

        report = verify_sufficiency(family, 0.0, family.at(0.5), ["le:0"])

        entry = report.sufficiency[0]
        expected = stats.norm.cdf(-0.5) - 0.5
        assert entry.discrimination == pytest.approx(expected, abs=1e-6)
        assert entry.discrimination == pytest.approx(-0.1914625, abs=1e-6)
        assert entry.predicate == pytest.approx(expected, abs=1e-12)
        assert entry.consistent
        assert entry.status == EntryStatus.DISCRIMINATES
        assert report.verdict == ReportVerdict.VIOLATED

    def test_poisson(self):
        """Test E_alt[T f_A] = e^-1.2 - e^-1 under Poisson(1.2) for A = {0}."""

        family = builtin("poisson_lambda")

        report = verify_sufficiency(family, 1.0, family.at(1.2), [EventSet.integers([0])])

        expected = math.exp(-1.2) - math.exp(-1.0)
        assert report.sufficiency[0].discrimination == pytest.approx(expected, abs=1e-9)
        assert report.sufficiency[0].predicate == pytest.approx(expected, abs=1e-12)

    def test_event_order(self):
        """Test that the entries are sorted by event."""

        family = builtin("gaussian_loc")

        report = verify_sufficiency(family, 0.0, family.at(0.5), ["le:1", "interval:-1,0", "le:0"])

        assert [str(entry.event) for entry in report.sufficiency] == [
            "interval:-1,0",
            "le:0",
            "le:1",
        ]

    @pytest.mark.parametrize(
        ("name", "theta0", "events"),
        [
            ("gaussian_loc", 0.0, ["le:0", "le:1", "interval:-1,0.5"]),
            ("poisson_lambda", 1.0, ["int:{0}", "le:2"]),
            ("exponential_scale", 1.0, ["interval:0,1"]),
        ],
    )
    def test_target(self, name, theta0, events):
        """Test that the target itself is never discriminated."""

        family = builtin(name)

        report = verify_sufficiency(family, theta0, family.at(theta0), events)

        assert all(abs(entry.discrimination) <= 1e-8 for entry in report.sufficiency)
        assert all(entry.status == EntryStatus.INDISTINGUISHABLE for entry in report.sufficiency)
        assert report.verdict == ReportVerdict.CHARACTERIZED

    def test_conditional(self):
        """Test that a shifted exponential conditioned on [0, inf) matches the target."""

        family = builtin("exponential_loc")

        report = verify_sufficiency(family, 0.0, family.at(-0.5), ["le:1"])

        entry = report.sufficiency[0]
        assert entry.conditional
        assert entry.predicate == pytest.approx(0.0, abs=1e-12)
        assert entry.discrimination == pytest.approx(0.0, abs=1e-6)
        assert report.conditional
        assert any(note.startswith("conditional verdict") for note in report.notes)

    def test_solver_error(self):
        """Test that events without a solution are recorded as errors."""

        family = builtin("gaussian_scale")

        report = verify_sufficiency(family, 1.0, family.at(1.5), ["le:0.5"])

        assert report.sufficiency[0].status == EntryStatus.ERROR
        assert report.sufficiency[0].message
        assert report.verdict == ReportVerdict.INCONCLUSIVE

    @pytest.mark.parametrize("events", [[], ["int:{0}"]])
    def test_invalid_events(self, events):
        """Test empty event lists and integer sets of a continuous family."""

        family = builtin("gaussian_loc")

        with pytest.raises(ParameterError):
            verify_sufficiency(family, 0.0, family.at(0.5), events)


class TestDiscriminationPredicate:
    """Test suite for discrimination_predicate."""

    def test_half_line(self):
        """Test P_alt(A) - P_theta0(A) for equal supports."""

        family = builtin("gaussian_loc")

        value = discrimination_predicate(family, 0.0, family.at(1.0), EventSet.half_line(0.0))

        assert value == pytest.approx(stats.norm.cdf(-1.0) - 0.5, abs=1e-12)

    def test_conditional(self):
        """Test the conditioning on S_theta0."""

        family = builtin("uniform_loc", {"a": 0.0, "b": 1.0})

        value = discrimination_predicate(family, 0.0, family.at(-0.5), EventSet.half_line(0.25))

        assert value == pytest.approx(0.5 - 0.25, abs=1e-12)


class TestDefaultEvents:
    """Test suite for default_events."""

    def test_continuous(self):
        """Test the half-lines at the quartiles."""

        events = default_events(builtin("gaussian_loc"), 0.0)

        assert [event.bounds[0] for event in events] == pytest.approx(
            list(stats.norm.ppf([0.25, 0.5, 0.75]))
        )

    def test_symmetric(self):
        """Test the intervals symmetric about 0 of a Student target."""

        events = default_events(builtin("student_nu"), 5.0)
        upper = stats.t.ppf([0.75, 0.9], 5.0)

        assert [event.bounds for event in events] == [
            pytest.approx((-upper[0], upper[0])),
            pytest.approx((-upper[1], upper[1])),
        ]

    def test_discrete(self):
        """Test the lower end and the median half-line."""

        assert [str(event) for event in default_events(builtin("poisson_lambda"), 1.0)] == [
            "int:{0}",
            "le:1",
        ]


class TestCharacterize:
    """Test suite for characterize."""

    def test_alternative(self):
        """Test the merged report of a discriminated alternative."""

        family = builtin("gaussian_loc")

        report = characterize(
            family,
            0.0,
            battery=[identity(), constant()],
            events=["le:0"],
            alternative=family.at(0.5),
            check=False,
        )

        assert len(report.necessity) == 2
        assert len(report.sufficiency) == 1
        assert report.verdict == ReportVerdict.VIOLATED
        assert report.to_dict()["verdict"] == "violated"

    def test_target_events(self):
        """Test that events without an alternative are checked against the target."""

        family = builtin("gaussian_loc")

        report = characterize(family, battery=[identity()], events=["le:0"], check=False)

        assert report.sufficiency[0].alternative == family.at(0.0).label
        assert report.verdict == ReportVerdict.CHARACTERIZED

    def test_default_events(self):
        """Test the default events of an alternative."""

        family = builtin("gaussian_loc")

        report = characterize(
            family, battery=[identity()], alternative=family.at(0.25), check=False
        )

        assert len(report.sufficiency) == 3
        assert report.verdict == ReportVerdict.VIOLATED

    def test_named_flavor(self):
        """Test that the events of a named operator are solved."""

        family = builtin("uniform_a")
        theta0 = family.default_theta

        report = characterize(family, theta0, "named", [constant()], ["le:0.5"], check=False)

        assert report.flavor.value == "named"
        assert report.sufficiency[0].status != EntryStatus.ERROR
        assert report.sufficiency[0].predicate == pytest.approx(0.0, abs=1e-12)

    def test_student_default_events(self):
        """Test that a Student target is discriminated on symmetric events."""

        alternative = builtin("gaussian_loc").at(0.0)

        report = characterize(
            builtin("student_nu"), 5.0, battery=[constant()], alternative=alternative, check=False
        )

        assert len(report.sufficiency) == 2
        for entry in report.sufficiency:
            assert entry.status == EntryStatus.DISCRIMINATES
            assert entry.discrimination == pytest.approx(entry.predicate, abs=1e-5)

    def test_assumptions(self):
        """Test that the assumption reports are attached."""

        inconclusive = AssumptionReport(Assumption.B, Verdict.INCONCLUSIVE, [], math.nan)

        with patch.object(
            engine, "check_assumption", return_value=inconclusive
        ) as checker:
            report = characterize(
                builtin("gaussian_loc"), battery=[identity()], check=False, assumptions=["B"]
            )

        checker.assert_called_once()
        assert report.assumptions == [inconclusive]
        assert report.verdict == ReportVerdict.INCONCLUSIVE

    def test_assumption_a(self):
        """Test a passing assumption check."""

        report = characterize(
            builtin("gaussian_loc"), 0.0, battery=[identity()], check=False, assumptions=["A"]
        )

        assert report.assumptions[0].passed
        assert report.verdict == ReportVerdict.CHARACTERIZED
