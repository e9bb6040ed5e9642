"""Printed closed forms of the operators of the builtin families.

Each closed form evaluates the operator without differencing. They serve as the named
operators, as independent cross-checks of the generic operator and as the plain-text forms of
the reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable

import numpy as np
from scipy import special

from ..families import OperatorFlavor, ParametricFamily, Theta, precision_matrix
from ..test_functions import TestFunction

FormValues = Callable[[ParametricFamily, Theta, TestFunction, np.ndarray], np.ndarray]
FormConstant = Callable[[ParametricFamily, Theta, TestFunction], float]


@dataclass(frozen=True)
class ClosedForm:
    """A printed operator of a builtin family and flavor.

    Examples:
        >>> form = closed_form(builtin("poisson_lambda"), "discrete")
        >>> round(float(form(builtin("poisson_lambda"), (1.0,), identity(), 1.0)), 7)
        2.7182818
    """

    family: str
    """The family name."""

    flavor: OperatorFlavor
    """The flavor."""

    values: FormValues
    """The pointwise part, vectorized in x."""

    text: str
    """The plain-text form."""

    boundary_constant: FormConstant | None = None
    """A constant added on the support, carrying the boundary term of a moving endpoint."""

    @property
    def includes_boundary(self) -> bool:
        """Return True when the printed form already carries its boundary term."""
        return self.boundary_constant is not None

    def __call__(
        self, family: ParametricFamily, theta0: Theta, f0: TestFunction, x: Any
    ) -> float | np.ndarray:
        """Evaluate the printed form, exactly 0 outside S_theta0."""
        values = np.asarray(x, dtype=float)
        inside = np.asarray(family.support_fn(theta0).contains(values), dtype=bool)
        safe = np.where(inside, values, 0.0)
        with np.errstate(all="ignore"):
            result = np.asarray(self.values(family, theta0, f0, safe), dtype=float)
            if self.boundary_constant is not None:
                result = result + self.boundary_constant(family, theta0, f0)
        result = np.where(inside, result, 0.0)
        return float(result) if np.ndim(x) == 0 else result


def _f(f0: TestFunction, x: Any) -> np.ndarray:
    return np.asarray(f0.eval(x), dtype=float)


def _df(f0: TestFunction, x: Any) -> np.ndarray:
    return np.asarray(f0.derivative(x), dtype=float)


def _gaussian_loc(family, theta0, f0, x):
    t = x - theta0[0]
    return -_df(f0, t) + t / family.params["sigma"] ** 2 * _f(f0, t)


def _exponential_loc(family, theta0, f0, x):
    t = x - theta0[0]
    return -_df(f0, t) + family.params["rate"] * _f(f0, t)


def _uniform_loc(family, theta0, f0, x):
    return -_df(f0, x - theta0[0])


def _uniform_loc_named(family, theta0, f0, x):
    return _df(f0, x - theta0[0])


def _semicircle_loc(family, theta0, f0, x):
    t = x - theta0[0]
    return -_df(f0, t) + t * _f(f0, t) / (family.params["sigma"] ** 2 - t * t)


def _gaussian_coordinate(family, theta0, f0, x):
    precision = precision_matrix(np.asarray(family.params["cov"], dtype=float))
    j = family.params["coordinate"]
    others = [i for i in range(precision.shape[0]) if i != j]
    lam = float(precision[j, j])
    shift = -float(precision[j, others] @ np.asarray(family.params["x_rest"])) / lam
    t = x - theta0[0]
    return -_df(f0, t) + lam * (t - shift) * _f(f0, t)


def _gaussian_scale(family, theta0, f0, x):
    sigma = theta0[0]
    return x * _df(f0, sigma * x) + (1.0 / sigma - sigma * x * x) * _f(f0, sigma * x)


def _exponential_scale(family, theta0, f0, x):
    sigma = theta0[0]
    return x * _df(f0, sigma * x) + (1.0 / sigma - x) * _f(f0, sigma * x)


def _poisson(family, theta0, f0, x):
    lam = theta0[0]
    return math.exp(lam) * (_f(f0, x + 1) - x / lam * _f(f0, x))


def _geometric(family, theta0, f0, x):
    p = theta0[0]
    return -((x + 1) * _f(f0, x + 1) - x / (1.0 - p) * _f(f0, x)) / p


def _binomial(family, theta0, f0, x):
    p, n = theta0[0], family.params["n"]
    bracket = (n - x) * _f(f0, x + 1) - (1.0 - p) / p * x * _f(f0, x)
    return (1.0 - p) ** (-n - 2) * bracket


def _multinomial_terms(family: ParametricFamily, theta0: Theta) -> tuple[float, float, float]:
    n_bar = family.params["n"] - sum(family.params["x_rest"])
    p_bar = 1.0 - sum(family.params["p_rest"])
    return theta0[0], float(n_bar), p_bar


def _multinomial_named(family, theta0, f0, x):
    p1, n_bar, p_bar = _multinomial_terms(family, theta0)
    xi = p_bar / (p_bar - p1) ** (n_bar + 2)
    return xi * ((n_bar - x) * _f(f0, x + 1) - (p_bar - p1) / p1 * x * _f(f0, x))


def _multinomial_discrete(family, theta0, f0, x):
    _, n_bar, p_bar = _multinomial_terms(family, theta0)
    return p_bar**n_bar * _multinomial_named(family, theta0, f0, x)


def _uniform_a(family, theta0, f0, x):
    width = family.params["b"] - theta0[0]
    u = (x - theta0[0]) / width
    return ((u - 1.0) * _df(f0, u) + _f(f0, u)) / width


def _uniform_a_constant(family, theta0, f0):
    return -float(f0.eval(0.0)) / (family.params["b"] - theta0[0])


def _student(family, theta0, f0, x):
    nu = theta0[0]
    w = x * x / nu
    log_xi = (
        special.gammaln(0.5 * nu)
        - special.gammaln(0.5 * (nu + 1))
        - math.log(2.0 * nu * nu)
        + 0.5 * nu * np.log1p(w)
    )
    bracket = 2.0 * x * x * _df(f0, w) - _f(f0, w) * (x * x / (1.0 + w) - nu)
    return -np.exp(log_xi) * bracket


_LOCATION, _SCALE = OperatorFlavor.LOCATION, OperatorFlavor.SCALE
_DISCRETE, _NAMED = OperatorFlavor.DISCRETE, OperatorFlavor.NAMED

CLOSED_FORMS: dict[tuple[str, OperatorFlavor], ClosedForm] = {
    (form.family, form.flavor): form
    for form in (
        ClosedForm(
            "gaussian_loc",
            _LOCATION,
            _gaussian_loc,
            "-f0'(x - mu0) + ((x - mu0) / sigma^2) f0(x - mu0)",
        ),
        ClosedForm(
            "exponential_loc",
            _LOCATION,
            _exponential_loc,
            "-f0'(x - mu0) + rate f0(x - mu0), boundary -rate f0(0+)",
        ),
        ClosedForm(
            "uniform_loc",
            _LOCATION,
            _uniform_loc,
            "-f0'(x - mu0), boundary f0(b-) - f0(a+)",
        ),
        ClosedForm(
            "semicircle_loc",
            _LOCATION,
            _semicircle_loc,
            "-f0'(t) + t f0(t) / (sigma^2 - t^2), t = x - mu0; "
            "with f0 = (sigma^2 - t^2) f1: -((sigma^2 - t^2) f1'(t) - 3 t f1(t))",
        ),
        ClosedForm(
            "gaussian_multiv_coord",
            _LOCATION,
            _gaussian_coordinate,
            "-f0'(x - mu0) + Lambda_jj (x - mu0 - c) f0(x - mu0), "
            "c = -(1 / Lambda_jj) sum_{i != j} Lambda_ji x_i",
        ),
        ClosedForm(
            "gaussian_scale",
            _SCALE,
            _gaussian_scale,
            "x f0'(sigma0 x) + (1/sigma0 - sigma0 x^2) f0(sigma0 x)",
        ),
        ClosedForm(
            "exponential_scale",
            _SCALE,
            _exponential_scale,
            "x f0'(sigma0 x) + (1/sigma0 - x) f0(sigma0 x)",
        ),
        ClosedForm(
            "poisson_lambda",
            _DISCRETE,
            _poisson,
            "exp(lambda0) (f0(x+1) - (x / lambda0) f0(x))",
        ),
        ClosedForm(
            "geometric_p",
            _DISCRETE,
            _geometric,
            "-(1/p) ((x+1) f0(x+1) - (x / (1-p)) f0(x))",
        ),
        ClosedForm(
            "binomial_p",
            _DISCRETE,
            _binomial,
            "(1-p)^(-n-2) ((n-x) f0(x+1) - ((1-p)/p) x f0(x))",
        ),
        ClosedForm(
            "multinomial_p1_slice",
            _DISCRETE,
            _multinomial_discrete,
            "p_bar^n_bar xi(n) ((n_bar - x) f0(x+1) - ((p_bar - p1) / p1) x f0(x))",
        ),
        ClosedForm(
            "uniform_a",
            _NAMED,
            _uniform_a,
            "((u - 1) f0'(u) + f0(u) - f0(0)) / (b - a), u = (x - a) / (b - a)",
            boundary_constant=_uniform_a_constant,
        ),
        ClosedForm(
            "uniform_loc",
            _NAMED,
            _uniform_loc_named,
            "f0'(x - mu0), boundary f0(a+) - f0(b-)",
        ),
        ClosedForm(
            "student_nu",
            _NAMED,
            _student,
            "xi(x;nu) (2 x^2 f0'(x^2/nu) - f0(x^2/nu) (x^2 / (1 + x^2/nu) - nu)), "
            "xi(x;nu) = -Gamma(nu/2) / (2 nu^2 Gamma((nu+1)/2)) (1 + x^2/nu)^(nu/2)",
        ),
        ClosedForm(
            "multinomial_p1_slice",
            _NAMED,
            _multinomial_named,
            "xi(n) ((n_bar - x) f0(x+1) - ((p_bar - p1) / p1) x f0(x)), "
            "xi(n) = p_bar / (p_bar - p1)^(n_bar + 2)",
        ),
    )
}

GENERIC_TEXT: dict[OperatorFlavor, str] = {
    OperatorFlavor.GENERIC: "grad_theta (f(x;theta) g(x;theta)) / g(x;theta0)",
    OperatorFlavor.LOCATION: "-(f0'(x - mu0) + f0(x - mu0) g'(x;mu0) / g(x;mu0))",
    OperatorFlavor.SCALE: (
        "x f0'(sigma0 x) + f0(sigma0 x) (1/sigma0 + x g'(x;sigma0) / (sigma0 g(x;sigma0)))"
    ),
    OperatorFlavor.DISCRETE: "Delta+ (f0 psi(.;theta0))(x) / g(x;theta0)",
    OperatorFlavor.NAMED: "grad_theta (f(x;theta) g(x;theta)) / g(x;theta0), f = named lift of f0",
}


def closed_form(family: ParametricFamily, flavor: OperatorFlavor | str) -> ClosedForm | None:
    """Return the printed form of a builtin family and flavor, if any.

    Args:
        family (ParametricFamily): The family.
        flavor (OperatorFlavor | str): The flavor.

    Returns:
        ClosedForm | None: The printed form.
    """
    return CLOSED_FORMS.get((family.name, OperatorFlavor.parse(flavor)))


def closed_form_text(family: ParametricFamily, flavor: OperatorFlavor | str) -> str:
    """Return the plain-text operator of a family and flavor.

    Families without a printed form get the general expression of their flavor.

    Examples:
        >>> closed_form_text(builtin("geometric_p"), "discrete")
        '-(1/p) ((x+1) f0(x+1) - (x / (1-p)) f0(x))'
    """
    flavor = OperatorFlavor.parse(flavor)
    form = closed_form(family, flavor)
    return form.text if form is not None else GENERIC_TEXT[flavor]


def multivariate_gaussian_apply(cov: Any, coordinate: int, f0: TestFunction, x: Any) -> float:
    """Evaluate d_j f0(x) - (Sigma^-1 x)_j f0(x) for a centered Gaussian vector.

    The sign is opposite to the location operator of the coordinate slice at mu0 = 0.

    Args:
        cov (Any): The covariance matrix Sigma.
        coordinate (int): The 0-based coordinate j.
        f0 (TestFunction): A function of a vector, with a gradient or not.
        x (Any): The point.

    Returns:
        float: The operator value.

    Raises:
        ParameterError: If Sigma is not symmetric positive definite.
        IndexError: If the coordinate or the dimension of x does not match Sigma.

    Examples:
        >>> f0 = TestFunction(lambda x: x[0], gradient=lambda x: np.array([1.0, 0.0]))
        >>> multivariate_gaussian_apply(np.eye(2), 0, f0, [1.0, 2.0])
        0.0
    """
    precision = precision_matrix(cov)
    vector = np.asarray(x, dtype=float)
    if vector.shape != (precision.shape[0],):
        raise IndexError(f"x must have {precision.shape[0]} coordinates, got {vector.shape}")
    if not 0 <= coordinate < vector.size:
        raise IndexError(f"coordinate must lie in [0, {vector.size}), got {coordinate}")
    sigma_j = float((precision @ vector)[coordinate])
    return f0.partial(vector, coordinate) - sigma_j * float(f0.function(vector))
