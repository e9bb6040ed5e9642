"""Records of a characterization run and their JSON and markdown renderings."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum

from ..families import AssumptionReport, OperatorFlavor, Theta, Verdict
from ..numerics import NumericReport
from ..solver import EventSet
from ..test_functions import ConditionReport

logger = logging.getLogger(__name__)

# Smallest gap reported as a genuine discrepancy
VIOLATION_FLOOR = 1e-6

# Ratio between the error estimate of an expectation and the gap reported as a discrepancy
ERROR_MULTIPLIER = 10.0

FINITE_BATTERY_NOTE = (
    "A finite battery can refute the zero-expectation identity, it cannot establish it for "
    "every admissible test function."
)

CONDITIONAL_NOTE = "conditional verdict"


def violation_threshold(report: NumericReport, floor: float = VIOLATION_FLOOR) -> float:
    """Return the gap above which an expectation is reported as nonzero.

    Args:
        report (NumericReport): The expectation.
        floor (float, optional): The smallest threshold. Defaults to 1e-6.

    Returns:
        float: max(floor, 10 times the error estimate).

    Examples:
        >>> violation_threshold(NumericReport(0.0, 1e-9, 1))
        1e-06
        >>> violation_threshold(NumericReport(0.0, 1e-5, 1))
        0.0001
    """
    return max(floor, ERROR_MULTIPLIER * report.abs_error_estimate)


class ReportVerdict(str, Enum):
    """The overall outcome of a characterization run."""

    CHARACTERIZED = "characterized"
    VIOLATED = "violated"
    INCONCLUSIVE = "inconclusive"


class EntryStatus(str, Enum):
    """The outcome of one battery member or one event."""

    ZERO = "zero"
    NONZERO = "nonzero"
    EXCLUDED = "excluded"
    DISCRIMINATES = "discriminates"
    INDISTINGUISHABLE = "indistinguishable"
    ERROR = "error"


@dataclass
class NecessityEntry:
    """The expectation of the operator applied to one battery member under the target.

    Examples:
        >>> entry = NecessityEntry("x", 1e-12, 1e-14, EntryStatus.ZERO)
        >>> entry.evaluated
        True
    """

    label: str
    """The label of the test function."""

    expectation: float | None
    abs_error: float | None
    status: EntryStatus
    conditions: list[ConditionReport] = field(default_factory=list)
    """The admissibility checks run before the expectation, if any."""

    message: str = ""

    @property
    def evaluated(self) -> bool:
        """Return True when the expectation was computed."""
        return self.status in (EntryStatus.ZERO, EntryStatus.NONZERO)

    def to_dict(self) -> dict:
        """Return a JSON-friendly representation."""
        return {
            "label": self.label,
            "expectation": self.expectation,
            "abs_error": self.abs_error,
            "status": self.status.value,
            "conditions": [report.to_dict() for report in self.conditions],
            "message": self.message,
        }


@dataclass
class SufficiencyEntry:
    """The expectation of the operator applied to f_A under an alternative law.

    The predicate is P_alt(A | S_theta0) - P_theta0(A), the value the measured expectation should
    match.
    """

    event: EventSet
    alternative: str
    """The label of the alternative law."""

    discrimination: float | None
    abs_error: float | None
    predicate: float | None
    status: EntryStatus
    conditional: bool = False
    """True when the alternative puts mass outside S_theta0 and was conditioned on it."""

    tolerance: float = VIOLATION_FLOOR
    message: str = ""

    @property
    def consistent(self) -> bool:
        """Return True when the measured value matches the predicate within the tolerance."""
        if self.discrimination is None or self.predicate is None:
            return False
        return abs(self.discrimination - self.predicate) <= self.tolerance

    def to_dict(self) -> dict:
        """Return a JSON-friendly representation."""
        return {
            "event": str(self.event),
            "alternative": self.alternative,
            "discrimination": self.discrimination,
            "abs_error": self.abs_error,
            "predicate": self.predicate,
            "status": self.status.value,
            "conditional": self.conditional,
            "consistent": self.consistent,
            "tolerance": self.tolerance,
            "message": self.message,
        }


@dataclass
class CurvePoint:
    """One point of a discrimination curve."""

    delta: float
    expectation: float
    abs_error: float
    message: str = ""

    def to_dict(self) -> dict:
        """Return a JSON-friendly representation."""
        return {
            "delta": self.delta,
            "expectation": self.expectation,
            "abs_error": self.abs_error,
            "message": self.message,
        }


def _number(value: float | None, digits: int = 7) -> str:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return "-"
    return f"{value:.{digits}g}"


@dataclass
class CharacterizationReport:
    """The evidence gathered for a Stein characterization of a family at theta0.

    The verdict is derived from the entries:

    - violated when an expectation under the target is nonzero, or when an alternative is
      discriminated from the target,
    - inconclusive when an entry failed, a measured discrimination misses its predicate, an
      attached assumption does not pass, or nothing could be evaluated,
    - characterized otherwise.

    Examples:
        >>> report = CharacterizationReport("gaussian_loc", (0.0,), OperatorFlavor.LOCATION)
        >>> report.verdict
        <ReportVerdict.INCONCLUSIVE: 'inconclusive'>
    """

    family: str
    """The label of the family."""

    theta0: Theta
    flavor: OperatorFlavor
    operator_text: str = ""
    """The plain-text closed form of the operator, when one is printed."""

    necessity: list[NecessityEntry] = field(default_factory=list)
    sufficiency: list[SufficiencyEntry] = field(default_factory=list)
    assumptions: list[AssumptionReport] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def conditions(self) -> list[ConditionReport]:
        """Return the admissibility checks of every battery member."""
        return [report for entry in self.necessity for report in entry.conditions]

    @property
    def excluded(self) -> list[str]:
        """Return the labels of the battery members excluded by the admissibility checks."""
        return [entry.label for entry in self.necessity if entry.status == EntryStatus.EXCLUDED]

    @property
    def conditional(self) -> bool:
        """Return True when some alternative was conditioned on S_theta0."""
        return any(entry.conditional for entry in self.sufficiency)

    @property
    def verdict(self) -> ReportVerdict:
        """Return the overall verdict."""
        if any(entry.status == EntryStatus.NONZERO for entry in self.necessity) or any(
            entry.status == EntryStatus.DISCRIMINATES for entry in self.sufficiency
        ):
            return ReportVerdict.VIOLATED

        evaluated = [entry for entry in self.necessity if entry.evaluated]
        if self.necessity and not evaluated:
            return ReportVerdict.INCONCLUSIVE
        if not evaluated and not self.sufficiency:
            return ReportVerdict.INCONCLUSIVE
        if any(entry.status == EntryStatus.ERROR for entry in self.necessity):
            return ReportVerdict.INCONCLUSIVE
        if any(not entry.consistent for entry in self.sufficiency):
            return ReportVerdict.INCONCLUSIVE
        if any(report.verdict != Verdict.PASS for report in self.assumptions):
            return ReportVerdict.INCONCLUSIVE
        return ReportVerdict.CHARACTERIZED

    def merge(self, other: CharacterizationReport) -> CharacterizationReport:
        """Return a report holding the entries of both reports.

        Args:
            other (CharacterizationReport): A report on the same family and theta0.

        Returns:
            CharacterizationReport: The merged report.

        Raises:
            ValueError: If the reports are about different targets.
        """
        if (other.family, other.theta0) != (self.family, self.theta0):
            raise ValueError(
                f"Cannot merge reports on {self.family} at {self.theta0} "
                f"and {other.family} at {other.theta0}"
            )
        notes = list(self.notes)
        notes.extend(note for note in other.notes if note not in notes)
        return CharacterizationReport(
            self.family,
            self.theta0,
            self.flavor,
            self.operator_text or other.operator_text,
            self.necessity + other.necessity,
            self.sufficiency + other.sufficiency,
            self.assumptions + other.assumptions,
            notes,
        )

    def to_dict(self) -> dict:
        """Return a JSON-friendly representation."""
        return {
            "family": self.family,
            "theta0": list(self.theta0),
            "flavor": self.flavor.value,
            "operator": self.operator_text,
            "verdict": self.verdict.value,
            "necessity": [entry.to_dict() for entry in self.necessity],
            "sufficiency": [entry.to_dict() for entry in self.sufficiency],
            "assumptions": [report.to_dict() for report in self.assumptions],
            "excluded": self.excluded,
            "conditional": self.conditional,
            "notes": list(self.notes),
        }

    def to_markdown(self) -> str:
        """Render the report as a markdown document.

        Returns:
            str: The document, ending with a newline.
        """
        theta = ", ".join(f"{value:g}" for value in self.theta0)
        lines = [
            f"# Stein characterization of {self.family}",
            "",
            f"- theta0: ({theta})",
            f"- flavor: {self.flavor.value}",
            f"- verdict: **{self.verdict.value}**",
        ]
        if self.conditional:
            lines.append(f"- {CONDITIONAL_NOTE}: alternatives were conditioned on S_theta0")
        if self.operator_text:
            lines += ["", "## Operator", "", "```text", self.operator_text, "```"]

        if self.necessity:
            lines += [
                "",
                "## Necessity",
                "",
                "| test function | E[T f] | error | status | message |",
                "| --- | --- | --- | --- | --- |",
            ]
            for entry in self.necessity:
                lines.append(
                    f"| {entry.label} | {_number(entry.expectation)} | "
                    f"{_number(entry.abs_error, 3)} | {entry.status.value} | {entry.message} |"
                )

        if self.sufficiency:
            lines += [
                "",
                "## Sufficiency",
                "",
                "| event | alternative | E_alt[T f_A] | predicate | status | conditional |",
                "| --- | --- | --- | --- | --- | --- |",
            ]
            for entry in self.sufficiency:
                lines.append(
                    f"| {entry.event.label} | {entry.alternative} | "
                    f"{_number(entry.discrimination)} | {_number(entry.predicate)} | "
                    f"{entry.status.value} | {'yes' if entry.conditional else 'no'} |"
                )

        conditions = [
            (entry.label, report) for entry in self.necessity for report in entry.conditions
        ]
        if conditions:
            lines += [
                "",
                "## Conditions",
                "",
                "| test function | condition | verdict | message |",
                "| --- | --- | --- | --- |",
            ]
            for label, report in conditions:
                lines.append(
                    f"| {label} | {report.condition} | {report.verdict.value} | {report.message} |"
                )

        if self.assumptions:
            lines += ["", "## Assumptions", ""]
            for report in self.assumptions:
                detail = f": {report.message}" if report.message else ""
                lines.append(f"- {report.assumption.value}: {report.verdict.value}{detail}")

        if self.notes:
            lines += ["", "## Notes", ""]
            lines += [f"- {note}" for note in self.notes]
        return "\n".join(lines) + "\n"
