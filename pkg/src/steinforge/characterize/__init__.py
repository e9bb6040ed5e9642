"""Verification of both directions of a Stein characterization."""

__all__ = [
    "characterize",
    "CharacterizationReport",
    "coordinate_expectations",
    "CurvePoint",
    "default_events",
    "discrimination_curve",
    "discrimination_predicate",
    "EntryStatus",
    "expectation_of_operator",
    "is_conditional",
    "NecessityEntry",
    "ReportVerdict",
    "shifted_theta",
    "SufficiencyEntry",
    "verify_necessity",
    "verify_sufficiency",
    "VIOLATION_FLOOR",
    "violation_threshold",
]

from .engine import (
    characterize,
    default_events,
    discrimination_predicate,
    verify_necessity,
    verify_sufficiency,
)
from .expectations import (
    coordinate_expectations,
    discrimination_curve,
    expectation_of_operator,
    is_conditional,
    shifted_theta,
)
from .reports import (
    VIOLATION_FLOOR,
    CharacterizationReport,
    CurvePoint,
    EntryStatus,
    NecessityEntry,
    ReportVerdict,
    SufficiencyEntry,
    violation_threshold,
)
