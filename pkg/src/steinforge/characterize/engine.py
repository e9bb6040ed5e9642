"""Necessity and sufficiency checks of a Stein characterization."""

from __future__ import annotations

import logging
import math
from typing import Any, Sequence

from ..errors import ConditioningError, ParameterError, SteinForgeError
from ..families import (
    Assumption,
    OperatorFlavor,
    ParametricFamily,
    ParametrizedLaw,
    Verdict,
    check_assumption,
    probability,
    quantile,
)
from ..operators import SteinOperator
from ..solver import SYMMETRIC_EVENT_FAMILIES, EventKind, EventSet, solve
from ..test_functions import Battery, adapt_battery, battery_from_spec, check_conditions
from ..utils import Budget
from .expectations import expectation_of_operator, is_conditional
from .reports import (
    CONDITIONAL_NOTE,
    FINITE_BATTERY_NOTE,
    VIOLATION_FLOOR,
    CharacterizationReport,
    EntryStatus,
    NecessityEntry,
    SufficiencyEntry,
    violation_threshold,
)

logger = logging.getLogger(__name__)

# Quantile levels of the default half-line events
EVENT_LEVELS = (0.25, 0.5, 0.75)

# Upper quantile levels of the default symmetric intervals
SYMMETRIC_LEVELS = (0.75, 0.9)


def default_events(family: ParametricFamily, theta0: Any = None) -> list[EventSet]:
    """Return events suited to discriminate alternatives from g(.;theta0).

    Continuous families get the half-lines at the quartiles, or the intervals symmetric about
    0 when their solutions need them. Discrete families get the lower end of the support and
    the half-line at the median.

    Args:
        family (ParametricFamily): The family.
        theta0 (Any, optional): The parameter. Defaults to the family's theta0.

    Returns:
        list[EventSet]: The events.

    Examples:
        >>> [str(event) for event in default_events(builtin("poisson_lambda"), 1.0)]
        ['int:{0}', 'le:1']
    """
    theta0 = family.check_theta(theta0)
    if family.discrete:
        lower = family.support_fn(theta0).lo
        return [EventSet.integers([lower]), EventSet.half_line(quantile(family, theta0, 0.5))]
    if family.name in SYMMETRIC_EVENT_FAMILIES:
        uppers = [quantile(family, theta0, level) for level in SYMMETRIC_LEVELS]
        return [EventSet.interval(-upper, upper) for upper in uppers]
    return [EventSet.half_line(quantile(family, theta0, level)) for level in EVENT_LEVELS]


def _report(op: SteinOperator) -> CharacterizationReport:
    return CharacterizationReport(op.family.label, op.theta0, op.flavor, op.text)


def verify_necessity(
    family: ParametricFamily,
    theta0: Any = None,
    flavor: OperatorFlavor | str | None = None,
    battery: Battery | None = None,
    check: bool = True,
    tolerance: float = VIOLATION_FLOOR,
    radius: float | None = None,
    budget: Budget | None = None,
) -> CharacterizationReport:
    """Check that E[T f(Z)] = 0 under the target for every member of a battery.

    Members failing an admissibility condition are excluded and recorded, never counted as
    violations. A member is nonzero when |E| exceeds max(tolerance, 10 times the error
    estimate).

    Environment Variables:
        STEINFORGE_CHECK_SECONDS: The wall-clock budget of each admissibility check when no
            budget is given.

    Args:
        family (ParametricFamily): The family.
        theta0 (Any, optional): The parameter. Defaults to the family's theta0.
        flavor (OperatorFlavor | str | None, optional): The flavor. Defaults to the family's
            default flavor.
        battery (Battery | None, optional): The test functions. Defaults to the damped cubic
            polynomials, weighted for the family.
        check (bool, optional): Run the admissibility checks first. Defaults to True.
        tolerance (float, optional): The smallest gap reported as nonzero. Defaults to 1e-6.
        radius (float | None, optional): The neighborhood of the admissibility checks.
            Defaults to max(0.1, 0.1 |theta0|).
        budget (Budget | None, optional): The budget of the admissibility checks.

    Returns:
        CharacterizationReport: A report holding the necessity entries.

    Raises:
        ParameterError: If the battery is empty, or theta0 or the flavor is invalid.

    Examples:
        >>> report = verify_necessity(builtin("gaussian_loc"), 0.0, battery=[identity()])
        >>> report.verdict.value
        'characterized'
    """
    op = SteinOperator.create(family, theta0, flavor)
    if battery is None:
        battery = adapt_battery(battery_from_spec(None), family)
    if not battery:
        raise ParameterError("The battery of test functions must not be empty")

    report = _report(op)
    law = op.law
    for member in battery:
        label = member.label or str(member)
        conditions = []
        try:
            if check:
                conditions = check_conditions(
                    family, op.theta0, member, op.flavor, radius, budget=budget
                )
            failed = [condition for condition in conditions if condition.verdict == Verdict.FAIL]
            if failed:
                logger.warning(
                    "Excluding %s from the battery of %s: condition %s fails",
                    label,
                    family.name,
                    failed[0].condition,
                )
                report.necessity.append(
                    NecessityEntry(
                        label,
                        None,
                        None,
                        EntryStatus.EXCLUDED,
                        conditions,
                        f"condition {failed[0].condition} fails: {failed[0].message}",
                    )
                )
                continue

            expectation = expectation_of_operator(law, op, member)
        except SteinForgeError as e:
            logger.warning("No expectation for %s under %s: %s", label, law.label, e)
            report.necessity.append(
                NecessityEntry(label, None, None, EntryStatus.ERROR, conditions, str(e))
            )
            continue

        threshold = violation_threshold(expectation, tolerance)
        nonzero = abs(expectation.value) > threshold
        if nonzero:
            logger.warning(
                "E[T %s] = %.6g under %s exceeds %.3g",
                label,
                expectation.value,
                law.label,
                threshold,
            )
        report.necessity.append(
            NecessityEntry(
                label,
                expectation.value,
                expectation.abs_error_estimate,
                EntryStatus.NONZERO if nonzero else EntryStatus.ZERO,
                conditions,
            )
        )

    if not any(entry.evaluated for entry in report.necessity):
        logger.warning("No member of the battery of %s could be evaluated", family.name)
    report.necessity.sort(key=lambda entry: entry.label)
    report.notes.append(FINITE_BATTERY_NOTE)
    return report


def _breakpoints(event: EventSet) -> list[float]:
    if event.kind == EventKind.FINITE_INT_SET:
        return []
    return [bound for bound in event.bounds if math.isfinite(bound)]


def discrimination_predicate(
    family: ParametricFamily, theta0: Any, alternative: ParametrizedLaw, event: EventSet
) -> float:
    """Return P_alt(A | S_theta0) - P_theta0(A).

    Args:
        family (ParametricFamily): The target family.
        theta0 (Any): The target parameter.
        alternative (ParametrizedLaw): The alternative law.
        event (EventSet): The event A.

    Returns:
        float: The value E_alt[T f_A] should take.

    Raises:
        ConditioningError: If the alternative gives no mass to S_theta0.

    Examples:
        >>> gaussian = builtin("gaussian_loc")
        >>> value = discrimination_predicate(gaussian, 0.0, gaussian.at(0.5), EventSet.full())
        >>> round(value, 12)
        0.0
    """
    theta0 = family.check_theta(theta0)
    support = family.support_fn(theta0)
    within = probability(alternative.family, alternative.theta, support)
    if within <= 0:
        raise ConditioningError(f"The law {alternative.label} gives no mass to {support}")
    mass = event.mass(alternative.family, alternative.theta, support) / within
    return mass - event.mass(family, theta0)


def verify_sufficiency(
    family: ParametricFamily,
    theta0: Any,
    alternative: ParametrizedLaw,
    events: Sequence[EventSet | str],
    flavor: OperatorFlavor | str | None = None,
    tolerance: float = VIOLATION_FLOOR,
) -> CharacterizationReport:
    """Discriminate an alternative law from the target with the solutions f_A.

    For each event A the Stein equation T f = I_A - P_theta0(A) is solved, and E_alt[T f_A] is
    reported along with its predicate P_alt(A | S_theta0) - P_theta0(A). The alternative is
    discriminated when some |E_alt[T f_A]| exceeds max(tolerance, 10 times the error estimate).
    When the alternative puts mass outside S_theta0 it is conditioned on S_theta0 and the
    report carries a conditional verdict.

    Args:
        family (ParametricFamily): The target family.
        theta0 (Any): The target parameter, or None for the family's theta0.
        alternative (ParametrizedLaw): The law of the data.
        events (Sequence[EventSet | str]): The events A.
        flavor (OperatorFlavor | str | None, optional): The flavor of continuous solutions.
            Defaults to the family's default flavor.
        tolerance (float, optional): The smallest gap reported as a discrimination. Defaults to
            1e-6.

    Returns:
        CharacterizationReport: A report holding the sufficiency entries. Events without a
            solution are recorded as errors.

    Raises:
        ParameterError: If the events are empty or do not fit the family.

    Examples:
        >>> gaussian = builtin("gaussian_loc")
        >>> report = verify_sufficiency(gaussian, 0.0, gaussian.at(0.5), ["le:0"])
        >>> round(report.sufficiency[0].discrimination, 7)
        -0.1914625
    """
    theta0 = family.check_theta(theta0)
    events = [EventSet.parse(event).check(family) for event in events]
    if not events:
        raise ParameterError("At least one event is needed to discriminate an alternative")

    options = {} if flavor is None or family.discrete else {"flavor": flavor}
    op = SteinOperator.create(family, theta0, family.default_flavor if flavor is None else flavor)
    report = _report(op)
    for event in events:
        conditional = False
        try:
            solution = solve(family, theta0, event, **options)
            solved = solution.operator()
            conditional = is_conditional(alternative, solved)
            expectation = expectation_of_operator(
                alternative, solved, solution.test_function(), _breakpoints(event)
            )
            predicate = discrimination_predicate(family, theta0, alternative, event)
        except SteinForgeError as e:
            logger.warning("No discrimination of %s on %s: %s", alternative.label, event, e)
            report.sufficiency.append(
                SufficiencyEntry(
                    event,
                    alternative.label,
                    None,
                    None,
                    None,
                    EntryStatus.ERROR,
                    conditional,
                    message=str(e),
                )
            )
            continue

        threshold = violation_threshold(expectation, tolerance)
        discriminates = abs(expectation.value) > threshold
        report.sufficiency.append(
            SufficiencyEntry(
                event,
                alternative.label,
                expectation.value,
                expectation.abs_error_estimate,
                predicate,
                EntryStatus.DISCRIMINATES if discriminates else EntryStatus.INDISTINGUISHABLE,
                conditional,
                threshold,
            )
        )
        logger.debug(
            "E_alt[T f_A] = %.6g for %s on %s, predicate %.6g",
            expectation.value,
            alternative.label,
            event,
            predicate,
        )

    if report.conditional:
        report.notes.append(
            f"{CONDITIONAL_NOTE}: {alternative.label} puts mass outside the support of the "
            "target, only its law conditioned on that support is compared"
        )
    report.sufficiency.sort(key=lambda entry: str(entry.event))
    return report


def characterize(
    family: ParametricFamily,
    theta0: Any = None,
    flavor: OperatorFlavor | str | None = None,
    battery: Battery | None = None,
    events: Sequence[EventSet | str] = (),
    alternative: ParametrizedLaw | None = None,
    check: bool = True,
    assumptions: Sequence[Assumption | str] = (),
    tolerance: float = VIOLATION_FLOOR,
    radius: float | None = None,
    budget: Budget | None = None,
) -> CharacterizationReport:
    """Gather the evidence of a Stein characterization of g(.;theta0).

    The report merges the necessity checks of the battery, the discrimination of an alternative
    on a list of events, and the requested regularity assumptions. Without an alternative, the
    events are checked against the target itself. With an alternative and no events, the
    default_events() are used.

    Args:
        family (ParametricFamily): The family.
        theta0 (Any, optional): The parameter. Defaults to the family's theta0.
        flavor (OperatorFlavor | str | None, optional): The flavor. Defaults to the family's
            default flavor.
        battery (Battery | None, optional): The test functions, used as given. Defaults to the
            damped cubic polynomials, weighted for the family.
        events (Sequence[EventSet | str], optional): The events. Defaults to ().
        alternative (ParametrizedLaw | None, optional): The law to discriminate. Defaults to
            None.
        check (bool, optional): Run the admissibility checks of the battery. Defaults to True.
        assumptions (Sequence[Assumption | str], optional): The assumptions to check, among
            A, A' and B. Defaults to ().
        tolerance (float, optional): The smallest gap reported as nonzero. Defaults to 1e-6.
        radius (float | None, optional): The neighborhood of the checks. Defaults to
            max(0.1, 0.1 |theta0|).
        budget (Budget | None, optional): The budget of the checks.

    Returns:
        CharacterizationReport: The merged report.

    Raises:
        ParameterError: If theta0, the flavor, the battery or an event is invalid.
        CapabilityError: If A' is requested for a continuous family.
    """
    op = SteinOperator.create(family, theta0, flavor)
    logger.info("Characterizing %s at %s with the %s operator", family.name, op.theta0, op.flavor)
    report = verify_necessity(
        family, op.theta0, op.flavor, battery, check, tolerance, radius, budget
    )

    if alternative is not None or events:
        law = op.law if alternative is None else alternative
        chosen = list(events) or default_events(family, op.theta0)
        report = report.merge(
            verify_sufficiency(family, op.theta0, law, chosen, op.flavor, tolerance)
        )

    for which in assumptions:
        assumption = check_assumption(family, which, op.theta0, radius, budget=budget)
        if not assumption.passed:
            logger.warning(
                "Assumption %s of %s: %s",
                assumption.assumption.value,
                family.name,
                assumption.verdict.value,
            )
        report.assumptions.append(assumption)

    logger.info("Verdict for %s: %s", family.name, report.verdict.value)
    return report
