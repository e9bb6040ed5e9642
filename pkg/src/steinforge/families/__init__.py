"""Parametric density families, their scores and the family catalog."""

__all__ = [
    "Assumption",
    "AssumptionReport",
    "binomial_p",
    "builtin",
    "BUILTIN_FACTORIES",
    "check_assumption",
    "check_normalization",
    "default_radius",
    "discrete_lift",
    "exponential_loc",
    "exponential_scale",
    "FamilyKind",
    "family_from_descriptor",
    "gaussian_loc",
    "gaussian_multiv_coord",
    "gaussian_scale",
    "geometric_p",
    "get_family",
    "interior_grid",
    "list_families",
    "load_family",
    "location_family",
    "multinomial_p1_slice",
    "normalization_defect",
    "OperatorFlavor",
    "param_score",
    "ParameterRole",
    "ParametricFamily",
    "ParametrizedLaw",
    "ParamSpace",
    "parse_expression",
    "poisson_lambda",
    "precision_matrix",
    "probability",
    "psi",
    "quantile",
    "register_family",
    "registration_grid",
    "restrict",
    "score_values",
    "semicircle_loc",
    "spatial_score",
    "spatial_values",
    "student_nu",
    "Theta",
    "uniform_a",
    "uniform_loc",
    "unregister_family",
    "Verdict",
]

from .assumptions import Assumption, AssumptionReport, Verdict, check_assumption
from .base_family import (
    FamilyKind,
    OperatorFlavor,
    ParameterRole,
    ParametricFamily,
    ParametrizedLaw,
    ParamSpace,
    Theta,
    default_radius,
)
from .builtins import (
    BUILTIN_FACTORIES,
    binomial_p,
    discrete_lift,
    exponential_loc,
    exponential_scale,
    gaussian_loc,
    gaussian_multiv_coord,
    gaussian_scale,
    geometric_p,
    multinomial_p1_slice,
    poisson_lambda,
    precision_matrix,
    semicircle_loc,
    student_nu,
    uniform_a,
    uniform_loc,
)
from .catalog import (
    builtin,
    check_normalization,
    get_family,
    list_families,
    location_family,
    register_family,
    registration_grid,
    restrict,
    unregister_family,
)
from .descriptors import family_from_descriptor, load_family, parse_expression
from .scores import (
    interior_grid,
    normalization_defect,
    param_score,
    probability,
    psi,
    quantile,
    score_values,
    spatial_score,
    spatial_values,
)
