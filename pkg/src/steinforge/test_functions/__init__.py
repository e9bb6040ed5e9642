"""Test functions, batteries, two-argument lifts and admissibility checks."""

__all__ = [
    "adapt_battery",
    "Battery",
    "battery_from_spec",
    "battery_to_dict",
    "check_conditions",
    "check_flavor",
    "condition_labels",
    "ConditionReport",
    "constant",
    "Damping",
    "from_callable",
    "hermite_battery",
    "identity",
    "lift",
    "polynomial_battery",
    "semicircle_precompose",
    "TestFunction",
    "TwoArgument",
    "with_lift",
]

from .batteries import (
    Battery,
    Damping,
    adapt_battery,
    battery_from_spec,
    battery_to_dict,
    hermite_battery,
    polynomial_battery,
)
from .conditions import ConditionReport, check_conditions, condition_labels
from .functions import TestFunction, TwoArgument, constant, from_callable, identity
from .lifts import check_flavor, lift, semicircle_precompose, with_lift
