"""The goodness-of-fit decision of a sample against a target law."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Sequence

from ..families import OperatorFlavor, ParametricFamily
from ..operators import SteinOperator
from ..test_functions import TestFunction, adapt_battery, battery_from_spec
from .samples import SampleSet
from .statistic import StatisticTerm, calibrate_threshold, default_n_sim, max_term, statistic_terms

logger = logging.getLogger(__name__)


class Decision(str, Enum):
    """The outcome of a goodness-of-fit test."""

    ACCEPT = "accept"
    REJECT = "reject"


@dataclass
class GofResult:
    """A Stein statistic compared with its calibrated threshold.

    Examples:
        >>> GofResult(0.01, 0.02, 0.05).decision
        <Decision.ACCEPT: 'accept'>
    """

    statistic: float
    threshold: float
    alpha: float
    per_function: list[StatisticTerm] = field(default_factory=list)
    target: str = ""
    samples: dict[str, Any] = field(default_factory=dict)
    n_sim: int = 0
    seed: int = 0

    @property
    def decision(self) -> Decision:
        """Reject exactly when the statistic exceeds the threshold."""
        return Decision.REJECT if self.statistic > self.threshold else Decision.ACCEPT

    def to_dict(self) -> dict:
        """Return a JSON-friendly representation."""
        return {
            "target": self.target,
            "samples": self.samples,
            "statistic": self.statistic,
            "threshold": self.threshold,
            "alpha": self.alpha,
            "decision": self.decision.value,
            "n_sim": self.n_sim,
            "seed": self.seed,
            "per_function": [term.to_dict() for term in self.per_function],
        }


def gof_test(
    samples: SampleSet,
    family: ParametricFamily,
    theta0: Any = None,
    flavor: OperatorFlavor | str | None = None,
    battery: Sequence[TestFunction] | None = None,
    alpha: float = 0.05,
    seed: int = 0,
    n_sim: int | None = None,
) -> GofResult:
    """Test whether samples follow g(.;theta0) with the Stein statistic of a battery.

    The threshold is calibrated by simulation at the size of the sample set.

    Args:
        samples (SampleSet): One-dimensional samples.
        family (ParametricFamily): The target family.
        theta0 (Any, optional): The parameter. Defaults to the family's theta0.
        flavor (OperatorFlavor | str | None, optional): The flavor. Defaults to the family's
            default flavor.
        battery (Sequence[TestFunction] | None, optional): The test functions. Defaults to the
            default battery adapted to the family.
        alpha (float, optional): The level. Defaults to 0.05.
        seed (int, optional): The calibration seed. Defaults to 0.
        n_sim (int | None, optional): The number of replications. Defaults to STEINFORGE_N_SIM.

    Returns:
        GofResult: The statistic, threshold and per-member breakdown.

    Raises:
        DegenerateBatteryError: If T f has no spread for every member.
        CapabilityError: If the family cannot be sampled.
    """
    battery = adapt_battery(battery_from_spec(None), family) if battery is None else battery
    n_sim = default_n_sim() if n_sim is None else n_sim
    op = SteinOperator.create(family, theta0, flavor)

    terms = statistic_terms(samples, op, battery)
    statistic = max_term(terms)
    threshold = calibrate_threshold(
        family, op.theta0, op.flavor, battery, samples.n, n_sim, alpha, seed
    )
    result = GofResult(
        statistic,
        threshold,
        alpha,
        terms,
        op.law.label,
        samples.to_dict(),
        n_sim,
        seed,
    )
    logger.info(
        "Stein statistic %g against threshold %g: %s",
        statistic,
        threshold,
        result.decision.value,
    )
    return result
