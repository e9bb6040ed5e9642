"""Builtin parametric families.

Every factory validates its fixed parameters and returns an immutable ParametricFamily with a
vectorized density, its support, analytic scores, a distribution function and a sampler.
"""

from __future__ import annotations

import math
from typing import Any, Callable, Sequence

import numpy as np
from scipy import special, stats

from ..errors import ParameterError
from ..numerics import Interval, IntRange
from .base_family import FamilyKind, ParameterRole, ParametricFamily, ParamSpace, Theta

REAL_LINE = Interval(-math.inf, math.inf)
POSITIVE = Interval(0.0, math.inf)
UNIT = Interval(0.0, 1.0)
NATURALS = IntRange(0, math.inf)


def _positive(value: Any, name: str) -> float:
    try:
        number = float(value)
    except (TypeError, ValueError) as e:
        raise ParameterError(f"{name} must be a positive real, got {value!r}") from e
    if not (math.isfinite(number) and number > 0):
        raise ParameterError(f"{name} must be a positive real, got {value}")
    return number


def _real(value: Any, name: str) -> float:
    try:
        number = float(value)
    except (TypeError, ValueError) as e:
        raise ParameterError(f"{name} must be a finite real, got {value!r}") from e
    if not math.isfinite(number):
        raise ParameterError(f"{name} must be a finite real, got {value}")
    return number


def _count(value: Any, name: str) -> int:
    try:
        number = float(value)
    except (TypeError, ValueError) as e:
        raise ParameterError(f"{name} must be a non-negative integer, got {value!r}") from e
    if isinstance(value, bool) or not number.is_integer() or number < 0:
        raise ParameterError(f"{name} must be a non-negative integer, got {value}")
    return int(number)


def discrete_lift(
    f0: Callable, pmf: Callable[[np.ndarray, Theta], np.ndarray], factor: float = 1.0
) -> Callable[[Any, Theta], Any]:
    """Return the two-argument form whose parameter derivative gives the discrete operator.

    The form is (f0(x+1) g(x+1;theta) - f0(x) g(x;theta)) / (g(x;theta) g(0;theta) factor).

    Args:
        f0 (Callable): The vectorized test function.
        pmf (Callable[[np.ndarray, Theta], np.ndarray]): The raw probability mass function.
        factor (float, optional): A constant dividing the form. Defaults to 1.0.

    Returns:
        Callable[[Any, Theta], Any]: The form f(x;theta).
    """

    def lifted(x: Any, theta: Theta) -> Any:
        x = np.asarray(x, dtype=float)
        with np.errstate(all="ignore"):
            step = np.asarray(f0(x + 1), dtype=float) * pmf(x + 1, theta) - np.asarray(
                f0(x), dtype=float
            ) * pmf(x, theta)
            return step / (pmf(x, theta) * pmf(np.zeros_like(x), theta) * factor)

    return lifted


def gaussian_loc(sigma: float = 1.0) -> ParametricFamily:
    """Return the Gaussian location family N(mu, sigma^2), theta = mu.

    Args:
        sigma (float, optional): The fixed standard deviation. Defaults to 1.0.

    Returns:
        ParametricFamily: The family.
    """
    sigma = _positive(sigma, "sigma")

    def pdf(x, theta):
        z = (x - theta[0]) / sigma
        return np.exp(-0.5 * z * z) / (sigma * math.sqrt(2 * math.pi))

    return ParametricFamily(
        name="gaussian_loc",
        kind=FamilyKind.CONTINUOUS,
        param_space=ParamSpace((REAL_LINE,)),
        pdf=pdf,
        support_fn=lambda theta: REAL_LINE,
        default_theta=(0.0,),
        param_names=("mu",),
        role=ParameterRole.LOCATION,
        default_flavor="location",
        params={"sigma": sigma},
        registration_box=(Interval(-2.0, 2.0),),
        logpdf=lambda x, theta: stats.norm.logpdf(x, theta[0], sigma),
        score=lambda x, theta: (x - theta[0]) / sigma**2,
        x_score=lambda x, theta: -(x - theta[0]) / sigma**2,
        cdf=lambda x, theta: stats.norm.cdf(x, theta[0], sigma),
        ppf=lambda q, theta: stats.norm.ppf(q, theta[0], sigma),
    )


def gaussian_scale() -> ParametricFamily:
    """Return the Gaussian scale family g(x;sigma) = sigma phi(sigma x), theta = sigma.

    Returns:
        ParametricFamily: The family.
    """

    def pdf(x, theta):
        s = theta[0]
        return s * np.exp(-0.5 * (s * x) ** 2) / math.sqrt(2 * math.pi)

    return ParametricFamily(
        name="gaussian_scale",
        kind=FamilyKind.CONTINUOUS,
        param_space=ParamSpace((POSITIVE,)),
        pdf=pdf,
        support_fn=lambda theta: REAL_LINE,
        default_theta=(1.0,),
        param_names=("sigma",),
        role=ParameterRole.SCALE,
        default_flavor="scale",
        registration_box=(Interval(0.5, 2.0),),
        logpdf=lambda x, theta: math.log(theta[0]) + stats.norm.logpdf(theta[0] * x),
        score=lambda x, theta: 1.0 / theta[0] - theta[0] * x * x,
        x_score=lambda x, theta: -theta[0] ** 2 * x,
        cdf=lambda x, theta: stats.norm.cdf(theta[0] * x),
        ppf=lambda q, theta: stats.norm.ppf(q) / theta[0],
    )


def exponential_loc(rate: float = 1.0) -> ParametricFamily:
    """Return the shifted exponential family rate exp(-rate (x - mu)) on [mu, inf), theta = mu.

    Args:
        rate (float, optional): The fixed rate. Defaults to 1.0.

    Returns:
        ParametricFamily: The family.
    """
    rate = _positive(rate, "rate")

    return ParametricFamily(
        name="exponential_loc",
        kind=FamilyKind.CONTINUOUS,
        param_space=ParamSpace((REAL_LINE,)),
        pdf=lambda x, theta: rate * np.exp(-rate * (x - theta[0])),
        support_fn=lambda theta: Interval(theta[0], math.inf),
        default_theta=(0.0,),
        param_names=("mu",),
        role=ParameterRole.LOCATION,
        default_flavor="location",
        params={"rate": rate},
        registration_box=(Interval(-2.0, 2.0),),
        logpdf=lambda x, theta: math.log(rate) - rate * (x - theta[0]),
        score=lambda x, theta: np.full_like(np.asarray(x, dtype=float), rate),
        x_score=lambda x, theta: np.full_like(np.asarray(x, dtype=float), -rate),
        cdf=lambda x, theta: stats.expon.cdf(x, loc=theta[0], scale=1.0 / rate),
        ppf=lambda q, theta: stats.expon.ppf(q, loc=theta[0], scale=1.0 / rate),
    )


def exponential_scale() -> ParametricFamily:
    """Return the exponential family sigma exp(-sigma x) on [0, inf), theta = sigma.

    Returns:
        ParametricFamily: The family.
    """
    return ParametricFamily(
        name="exponential_scale",
        kind=FamilyKind.CONTINUOUS,
        param_space=ParamSpace((POSITIVE,)),
        pdf=lambda x, theta: theta[0] * np.exp(-theta[0] * x),
        support_fn=lambda theta: POSITIVE,
        default_theta=(1.0,),
        param_names=("sigma",),
        role=ParameterRole.SCALE,
        default_flavor="scale",
        registration_box=(Interval(0.5, 2.0),),
        logpdf=lambda x, theta: math.log(theta[0]) - theta[0] * x,
        score=lambda x, theta: 1.0 / theta[0] - x,
        x_score=lambda x, theta: np.full_like(np.asarray(x, dtype=float), -theta[0]),
        cdf=lambda x, theta: -np.expm1(-theta[0] * np.maximum(x, 0.0)),
        ppf=lambda q, theta: -np.log1p(-q) / theta[0],
    )


def uniform_a(b: float = 1.0) -> ParametricFamily:
    """Return the uniform family U[a, b] parametrized by its lower endpoint, theta = a.

    The lift of its named operator is f(x;a) = f0((x - a) / (b - a)).

    Args:
        b (float, optional): The fixed upper endpoint. Defaults to 1.0.

    Returns:
        ParametricFamily: The family.
    """
    b = _real(b, "b")

    def lift(f0):
        return lambda x, theta: f0((np.asarray(x, dtype=float) - theta[0]) / (b - theta[0]))

    return ParametricFamily(
        name="uniform_a",
        kind=FamilyKind.CONTINUOUS,
        param_space=ParamSpace((Interval(-math.inf, b),)),
        pdf=lambda x, theta: np.full_like(np.asarray(x, dtype=float), 1.0 / (b - theta[0])),
        support_fn=lambda theta: Interval(theta[0], b),
        default_theta=(b - 1.0,),
        param_names=("a",),
        role=ParameterRole.SHAPE,
        default_flavor="named",
        params={"b": b},
        registration_box=(Interval(b - 3.0, b - 0.5),),
        score=lambda x, theta: np.full_like(np.asarray(x, dtype=float), 1.0 / (b - theta[0])),
        x_score=lambda x, theta: np.zeros_like(np.asarray(x, dtype=float)),
        cdf=lambda x, theta: np.clip((x - theta[0]) / (b - theta[0]), 0.0, 1.0),
        ppf=lambda q, theta: theta[0] + q * (b - theta[0]),
        lift=lift,
    )


def uniform_loc(a: float = 0.0, b: float = 1.0) -> ParametricFamily:
    """Return the uniform location family U[a + mu, b + mu], theta = mu.

    The lift of its named operator is f(x;mu) = -f0(x - mu), whose operator is f0'(x - mu).

    Args:
        a (float, optional): The lower endpoint at mu = 0. Defaults to 0.0.
        b (float, optional): The upper endpoint at mu = 0. Defaults to 1.0.

    Returns:
        ParametricFamily: The family.

    Raises:
        ParameterError: If b <= a.
    """
    a, b = _real(a, "a"), _real(b, "b")
    if b <= a:
        raise ParameterError(f"b must exceed a, got a={a}, b={b}")
    width = b - a

    return ParametricFamily(
        name="uniform_loc",
        kind=FamilyKind.CONTINUOUS,
        param_space=ParamSpace((REAL_LINE,)),
        pdf=lambda x, theta: np.full_like(np.asarray(x, dtype=float), 1.0 / width),
        support_fn=lambda theta: Interval(a + theta[0], b + theta[0]),
        default_theta=(0.0,),
        param_names=("mu",),
        role=ParameterRole.LOCATION,
        default_flavor="location",
        params={"a": a, "b": b},
        registration_box=(Interval(-2.0, 2.0),),
        score=lambda x, theta: np.zeros_like(np.asarray(x, dtype=float)),
        x_score=lambda x, theta: np.zeros_like(np.asarray(x, dtype=float)),
        cdf=lambda x, theta: np.clip((x - a - theta[0]) / width, 0.0, 1.0),
        ppf=lambda q, theta: a + theta[0] + q * width,
        lift=lambda f0: lambda x, theta: -np.asarray(
            f0(np.asarray(x, dtype=float) - theta[0]), dtype=float
        ),
    )


def semicircle_loc(sigma: float = 2.0) -> ParametricFamily:
    """Return the Wigner semicircle location family on [mu - sigma, mu + sigma], theta = mu.

    The density vanishes at both endpoints, so test functions are premultiplied by
    w(t) = sigma^2 - t^2.

    Args:
        sigma (float, optional): The fixed radius. Defaults to 2.0.

    Returns:
        ParametricFamily: The family.
    """
    sigma = _positive(sigma, "sigma")
    law = stats.semicircular

    def x_score(x, theta):
        t = x - theta[0]
        with np.errstate(divide="ignore"):
            return -t / (sigma * sigma - t * t)

    return ParametricFamily(
        name="semicircle_loc",
        kind=FamilyKind.CONTINUOUS,
        param_space=ParamSpace((REAL_LINE,)),
        pdf=lambda x, theta: (
            2.0 / (math.pi * sigma * sigma) * np.sqrt(np.maximum(sigma**2 - (x - theta[0]) ** 2, 0))
        ),
        support_fn=lambda theta: Interval(theta[0] - sigma, theta[0] + sigma),
        default_theta=(0.0,),
        param_names=("mu",),
        role=ParameterRole.LOCATION,
        default_flavor="location",
        params={"sigma": sigma},
        registration_box=(Interval(-2.0, 2.0),),
        score=lambda x, theta: -x_score(x, theta),
        x_score=x_score,
        cdf=lambda x, theta: law.cdf(x, loc=theta[0], scale=sigma),
        ppf=lambda q, theta: law.ppf(q, loc=theta[0], scale=sigma),
        battery_weight=(lambda t: sigma * sigma - t * t, lambda t: -2.0 * t),
    )


def student_nu() -> ParametricFamily:
    """Return the Student family t_nu with nu > 2, theta = nu.

    The lift of its named operator is
    f(x;nu) = Gamma(nu/2) / Gamma((nu+1)/2) (1 + x^2/nu)^(nu/2) f0(x^2/nu).

    Returns:
        ParametricFamily: The family.
    """

    def score(x, theta):
        nu = theta[0]
        w = x * x / nu
        return (
            0.5 * (special.digamma(0.5 * (nu + 1)) - special.digamma(0.5 * nu))
            - 0.5 / nu
            - 0.5 * np.log1p(w)
            + (nu + 1) * x * x / (2 * nu * (nu + x * x))
        )

    def lift(f0):
        def lifted(x, theta):
            nu = theta[0]
            w = np.asarray(x, dtype=float) ** 2 / nu
            log_ratio = special.gammaln(0.5 * nu) - special.gammaln(0.5 * (nu + 1))
            return np.exp(log_ratio + 0.5 * nu * np.log1p(w)) * f0(w)

        return lifted

    return ParametricFamily(
        name="student_nu",
        kind=FamilyKind.CONTINUOUS,
        param_space=ParamSpace((Interval(2.0, math.inf),)),
        pdf=lambda x, theta: stats.t.pdf(x, theta[0]),
        support_fn=lambda theta: REAL_LINE,
        default_theta=(5.0,),
        param_names=("nu",),
        role=ParameterRole.SHAPE,
        default_flavor="named",
        registration_box=(Interval(3.0, 8.0),),
        logpdf=lambda x, theta: stats.t.logpdf(x, theta[0]),
        score=score,
        x_score=lambda x, theta: -(theta[0] + 1) * x / (theta[0] + x * x),
        cdf=lambda x, theta: stats.t.cdf(x, theta[0]),
        ppf=lambda q, theta: stats.t.ppf(q, theta[0]),
        lift=lift,
    )


def poisson_lambda() -> ParametricFamily:
    """Return the Poisson family, theta = lambda.

    Returns:
        ParametricFamily: The family.
    """
    return ParametricFamily(
        name="poisson_lambda",
        kind=FamilyKind.DISCRETE,
        param_space=ParamSpace((POSITIVE,)),
        pdf=lambda x, theta: stats.poisson.pmf(x, theta[0]),
        support_fn=lambda theta: NATURALS,
        default_theta=(1.0,),
        param_names=("lambda",),
        role=ParameterRole.SHAPE,
        default_flavor="discrete",
        registration_box=(Interval(0.5, 4.0),),
        logpdf=lambda x, theta: stats.poisson.logpmf(x, theta[0]),
        score=lambda x, theta: x / theta[0] - 1.0,
        cdf=lambda x, theta: stats.poisson.cdf(x, theta[0]),
        sampler=lambda rng, size, theta: rng.poisson(theta[0], size=size),
    )


def geometric_p() -> ParametricFamily:
    """Return the geometric family p (1 - p)^x on {0, 1, ...}, theta = p.

    Returns:
        ParametricFamily: The family.
    """
    return ParametricFamily(
        name="geometric_p",
        kind=FamilyKind.DISCRETE,
        param_space=ParamSpace((UNIT,)),
        pdf=lambda x, theta: stats.geom.pmf(x, theta[0], loc=-1),
        support_fn=lambda theta: NATURALS,
        default_theta=(0.5,),
        param_names=("p",),
        role=ParameterRole.SHAPE,
        default_flavor="discrete",
        registration_box=(Interval(0.2, 0.8),),
        logpdf=lambda x, theta: stats.geom.logpmf(x, theta[0], loc=-1),
        score=lambda x, theta: 1.0 / theta[0] - x / (1.0 - theta[0]),
        cdf=lambda x, theta: stats.geom.cdf(x, theta[0], loc=-1),
        sampler=lambda rng, size, theta: rng.geometric(theta[0], size=size) - 1,
    )


def binomial_p(n: int = 10) -> ParametricFamily:
    """Return the binomial family Bin(n, p), theta = p.

    Args:
        n (int, optional): The fixed number of trials. Defaults to 10.

    Returns:
        ParametricFamily: The family.
    """
    n = _count(n, "n")
    if n == 0:
        raise ParameterError("n must be a positive integer, got 0")

    return ParametricFamily(
        name="binomial_p",
        kind=FamilyKind.DISCRETE,
        param_space=ParamSpace((UNIT,)),
        pdf=lambda x, theta: stats.binom.pmf(x, n, theta[0]),
        support_fn=lambda theta: IntRange(0, n),
        default_theta=(0.3,),
        param_names=("p",),
        role=ParameterRole.SHAPE,
        default_flavor="discrete",
        params={"n": n},
        registration_box=(Interval(0.2, 0.8),),
        logpdf=lambda x, theta: stats.binom.logpmf(x, n, theta[0]),
        score=lambda x, theta: x / theta[0] - (n - x) / (1.0 - theta[0]),
        cdf=lambda x, theta: stats.binom.cdf(x, n, theta[0]),
        sampler=lambda rng, size, theta: rng.binomial(n, theta[0], size=size),
    )


def multinomial_p1_slice(
    n: int = 10,
    p_rest: Sequence[float] = (0.3,),
    x_rest: Sequence[int] = (3,),
) -> ParametricFamily:
    """Return the first-coordinate slice of a multinomial law, theta = p1.

    The other counts x_rest and probabilities p_rest are held fixed, so the first count follows
    the conditional law Bin(n_bar, p1 / p_bar) with n_bar = n - sum(x_rest) and
    p_bar = 1 - sum(p_rest).

    Args:
        n (int, optional): The number of trials. Defaults to 10.
        p_rest (Sequence[float], optional): The probabilities of the other cells.
            Defaults to (0.3,).
        x_rest (Sequence[int], optional): The observed counts of the other cells.
            Defaults to (3,).

    Returns:
        ParametricFamily: The family.

    Raises:
        ParameterError: If the configuration is not a valid multinomial slice.
    """
    n = _count(n, "n")
    p_rest = tuple(float(value) for value in p_rest)
    x_rest = tuple(_count(value, "x_rest") for value in x_rest)
    if len(p_rest) != len(x_rest):
        raise ParameterError("p_rest and x_rest must have the same length")
    if any(not 0 < value < 1 for value in p_rest) or sum(p_rest) >= 1:
        raise ParameterError(f"p_rest must be probabilities summing below 1, got {list(p_rest)}")
    n_bar = n - sum(x_rest)
    if n_bar <= 0:
        raise ParameterError(f"x_rest must leave at least one trial, got {list(x_rest)} of {n}")
    p_bar = 1.0 - sum(p_rest)

    def pmf(x, theta):
        return stats.binom.pmf(x, n_bar, theta[0] / p_bar)

    return ParametricFamily(
        name="multinomial_p1_slice",
        kind=FamilyKind.DISCRETE,
        param_space=ParamSpace((Interval(0.0, p_bar),)),
        pdf=pmf,
        support_fn=lambda theta: IntRange(0, n_bar),
        default_theta=(min(0.2, 0.5 * p_bar),),
        param_names=("p1",),
        role=ParameterRole.SHAPE,
        default_flavor="named",
        params={"n": n, "p_rest": list(p_rest), "x_rest": list(x_rest)},
        registration_box=(Interval(0.2 * p_bar, 0.8 * p_bar),),
        logpdf=lambda x, theta: stats.binom.logpmf(x, n_bar, theta[0] / p_bar),
        score=lambda x, theta: x / theta[0] - (n_bar - x) / (p_bar - theta[0]),
        cdf=lambda x, theta: stats.binom.cdf(x, n_bar, theta[0] / p_bar),
        sampler=lambda rng, size, theta: rng.binomial(n_bar, theta[0] / p_bar, size=size),
        lift=lambda f0: discrete_lift(f0, pmf, factor=p_bar**n_bar),
    )


def gaussian_multiv_coord(
    cov: Sequence[Sequence[float]] = ((1.0, 0.0), (0.0, 1.0)),
    coordinate: int = 0,
    x_rest: Sequence[float] = (0.0,),
) -> ParametricFamily:
    """Return the coordinatewise slice of a centered multivariate Gaussian, theta = mu_j.

    With the other coordinates fixed at x_rest, the j-th coordinate follows
    N(mu_j + c, 1 / Lambda_jj) where Lambda is the precision matrix and
    c = -(1 / Lambda_jj) sum_{i != j} Lambda_ji x_i.

    Args:
        cov (Sequence[Sequence[float]], optional): The covariance matrix. Defaults to I_2.
        coordinate (int, optional): The 0-based coordinate j. Defaults to 0.
        x_rest (Sequence[float], optional): The values of the other coordinates.
            Defaults to (0.0,).

    Returns:
        ParametricFamily: The family.

    Raises:
        ParameterError: If the covariance is not symmetric positive definite or the shapes
            disagree.
    """
    matrix = np.asarray(cov, dtype=float)
    precision = precision_matrix(matrix)
    k = matrix.shape[0]
    coordinate = _count(coordinate, "coordinate")
    if coordinate >= k:
        raise ParameterError(f"coordinate must be below {k}, got {coordinate}")
    rest = np.asarray(x_rest, dtype=float)
    if rest.shape != (k - 1,):
        raise ParameterError(f"x_rest must have {k - 1} values, got {list(rest)}")

    others = [i for i in range(k) if i != coordinate]
    lam = float(precision[coordinate, coordinate])
    shift = -float(precision[coordinate, others] @ rest) / lam
    sd = 1.0 / math.sqrt(lam)

    return ParametricFamily(
        name="gaussian_multiv_coord",
        kind=FamilyKind.CONTINUOUS,
        param_space=ParamSpace((REAL_LINE,)),
        pdf=lambda x, theta: stats.norm.pdf(x, theta[0] + shift, sd),
        support_fn=lambda theta: REAL_LINE,
        default_theta=(0.0,),
        param_names=("mu",),
        role=ParameterRole.LOCATION,
        default_flavor="location",
        params={"cov": matrix.tolist(), "coordinate": coordinate, "x_rest": rest.tolist()},
        registration_box=(Interval(-2.0, 2.0),),
        logpdf=lambda x, theta: stats.norm.logpdf(x, theta[0] + shift, sd),
        score=lambda x, theta: lam * (x - theta[0] - shift),
        x_score=lambda x, theta: -lam * (x - theta[0] - shift),
        cdf=lambda x, theta: stats.norm.cdf(x, theta[0] + shift, sd),
        ppf=lambda q, theta: stats.norm.ppf(q, theta[0] + shift, sd),
    )


def precision_matrix(cov: np.ndarray) -> np.ndarray:
    """Invert a covariance matrix after checking it is symmetric positive definite.

    Args:
        cov (np.ndarray): The covariance matrix.

    Returns:
        np.ndarray: The precision matrix.

    Raises:
        ParameterError: If the matrix is not square, symmetric and positive definite.

    Examples:
        >>> precision_matrix(np.diag([2.0, 1.0]))
        array([[0.5, 0. ],
               [0. , 1. ]])
    """
    cov = np.asarray(cov, dtype=float)
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1] or cov.shape[0] < 1:
        raise ParameterError(f"cov must be a square matrix, got shape {cov.shape}")
    if not np.allclose(cov, cov.T):
        raise ParameterError("cov must be symmetric")
    try:
        factor = np.linalg.cholesky(cov)
    except np.linalg.LinAlgError as e:
        raise ParameterError("cov must be positive definite") from e
    inverse = np.linalg.inv(factor)
    return inverse.T @ inverse


BUILTIN_FACTORIES: dict[str, Callable[..., ParametricFamily]] = {
    "gaussian_loc": gaussian_loc,
    "gaussian_scale": gaussian_scale,
    "exponential_loc": exponential_loc,
    "exponential_scale": exponential_scale,
    "uniform_a": uniform_a,
    "uniform_loc": uniform_loc,
    "semicircle_loc": semicircle_loc,
    "student_nu": student_nu,
    "poisson_lambda": poisson_lambda,
    "geometric_p": geometric_p,
    "binomial_p": binomial_p,
    "multinomial_p1_slice": multinomial_p1_slice,
    "gaussian_multiv_coord": gaussian_multiv_coord,
}
