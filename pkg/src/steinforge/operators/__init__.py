"""Pointwise Stein operators of parametric families."""

__all__ = [
    "CLOSED_FORMS",
    "ClosedForm",
    "closed_form",
    "closed_form_text",
    "discrete_apply",
    "exchanging_function",
    "generic_apply",
    "location_apply",
    "multivariate_gaussian_apply",
    "named_apply",
    "recipe_consistency",
    "RECIPE_TOL",
    "scale_apply",
    "spatial_form",
    "SteinOperator",
]

from .closed_forms import (
    CLOSED_FORMS,
    ClosedForm,
    closed_form,
    closed_form_text,
    multivariate_gaussian_apply,
)
from .operator import (
    SteinOperator,
    discrete_apply,
    generic_apply,
    location_apply,
    named_apply,
    scale_apply,
)
from .recipes import RECIPE_TOL, exchanging_function, recipe_consistency, spatial_form
