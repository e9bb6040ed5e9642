"""Custom families described by JSON documents.

A descriptor names the family, its single parameter and a density given either as a small
arithmetic expression or as an importable callable:

    {
        "name": "laplace_loc",
        "kind": "continuous",
        "parameter": "mu",
        "role": "location",
        "params": {"b": 1.0},
        "support": ["-inf", "inf"],
        "density_expression": "exp(-abs(x - mu) / b) / (2 * b)"
    }

Expressions accept numbers, the point x, the parameter, the fixed params, the operators
+ - * / ** and the functions pow, exp, log, sqrt, abs and indicator(lo, hi), the indicator of
lo <= x <= hi. Support endpoints are expressions of the parameter and the params, or "inf".
"""

from __future__ import annotations

import logging
import math
from pathlib import Path
from typing import Any, Callable

import numpy as np
import sympy as sp
from sympy.core.function import AppliedUndef
from sympy.parsing.sympy_parser import parse_expr, standard_transformations

from ..errors import ParameterError
from ..numerics import Interval, IntRange
from ..utils import File, import_callable
from .base_family import FamilyKind, ParameterRole, ParametricFamily, ParamSpace
from .catalog import register_family

logger = logging.getLogger(__name__)

DESCRIPTOR_KEYS = {
    "name",
    "kind",
    "parameter",
    "role",
    "flavor",
    "domain",
    "default",
    "params",
    "support",
    "density_expression",
    "density_callable",
    "registration_box",
}

# The parser builds numbers and symbols through these names only
_PARSER_GLOBALS = {
    "Integer": sp.Integer,
    "Float": sp.Float,
    "Rational": sp.Rational,
    "Symbol": sp.Symbol,
    "Function": sp.Function,
    "__builtins__": {},
}


def _indicator(x: sp.Symbol) -> Callable[[Any, Any], sp.Expr]:
    def indicator(lo: Any, hi: Any) -> sp.Expr:
        return sp.Piecewise((1, sp.And(x >= lo, x <= hi)), (0, True))

    return indicator


def parse_expression(
    text: str | float | int,
    symbols: dict[str, sp.Symbol],
    params: dict[str, float],
) -> sp.Expr:
    """Parse an arithmetic expression of the descriptor grammar.

    Args:
        text (str | float | int): The expression.
        symbols (dict[str, sp.Symbol]): The free symbols allowed, by name.
        params (dict[str, float]): The fixed parameters substituted by value.

    Returns:
        sp.Expr: The parsed expression.

    Raises:
        ParameterError: If the expression is malformed or uses unknown names.

    Examples:
        >>> x = sp.Symbol("x", real=True)
        >>> parse_expression("2 * x + b", {"x": x}, {"b": 1.0})
        2*x + 1.0
    """
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        return sp.Float(text) if math.isfinite(text) else (sp.oo if text > 0 else -sp.oo)
    if not isinstance(text, str) or not text.strip():
        raise ParameterError(f"Expected an expression, got {text!r}")

    local = {
        "exp": sp.exp,
        "log": sp.log,
        "sqrt": sp.sqrt,
        "abs": sp.Abs,
        "pow": sp.Pow,
        "pi": sp.pi,
        "inf": sp.oo,
        "oo": sp.oo,
        **{name: sp.Float(value) for name, value in params.items()},
        **symbols,
    }
    if "x" in symbols:
        local["indicator"] = _indicator(symbols["x"])

    try:
        expression = parse_expr(
            text,
            local_dict=local,
            global_dict=dict(_PARSER_GLOBALS),
            transformations=standard_transformations,
        )
    except (SyntaxError, TypeError, ValueError, AttributeError, sp.SympifyError) as e:
        raise ParameterError(f"Malformed expression {text!r}: {e}") from e

    if not isinstance(expression, sp.Basic):
        raise ParameterError(f"Malformed expression {text!r}")
    undefined = expression.atoms(AppliedUndef)
    if undefined:
        names = ", ".join(sorted(str(item.func) for item in undefined))
        raise ParameterError(f"Unknown function(s) in {text!r}: {names}")
    unknown = expression.free_symbols - set(symbols.values())
    if unknown:
        names = ", ".join(sorted(str(item) for item in unknown))
        raise ParameterError(f"Unknown name(s) in {text!r}: {names}")
    return expression


def _lambdify(expression: sp.Expr, args: tuple, modules: str = "numpy") -> Callable:
    return sp.lambdify(args, expression, modules=modules)


def family_from_descriptor(descriptor: dict) -> ParametricFamily:
    """Build a family from a descriptor document.

    Expression densities get analytic parameter and spatial scores by symbolic
    differentiation. Callable densities rely on numeric differentiation.

    Args:
        descriptor (dict): The descriptor.

    Returns:
        ParametricFamily: The family, not registered.

    Raises:
        ParameterError: If the descriptor is invalid.
    """
    if not isinstance(descriptor, dict):
        raise ParameterError(f"A family descriptor must be an object, got {type(descriptor)}")
    unknown = sorted(set(descriptor) - DESCRIPTOR_KEYS)
    if unknown:
        raise ParameterError(f"Unknown descriptor keys: {', '.join(unknown)}")
    for key in ("name", "support"):
        if key not in descriptor:
            raise ParameterError(f"Descriptor is missing '{key}'")
    has_expression = "density_expression" in descriptor
    if has_expression == ("density_callable" in descriptor):
        raise ParameterError("Descriptor needs exactly one of density_expression, density_callable")

    name = str(descriptor["name"])
    try:
        kind = FamilyKind(descriptor.get("kind", FamilyKind.CONTINUOUS.value))
        role = ParameterRole(descriptor.get("role", ParameterRole.SHAPE.value))
    except ValueError as e:
        raise ParameterError(f"Invalid descriptor of {name}: {e}") from e
    parameter = str(descriptor.get("parameter", "theta"))
    params = {key: float(value) for key, value in dict(descriptor.get("params", {})).items()}

    x = sp.Symbol("x", real=True)
    theta = sp.Symbol(parameter, real=True)

    domain = descriptor.get("domain", ["-inf", "inf"])
    box = Interval(*(_endpoint_value(value, params) for value in domain))
    space = ParamSpace((box,))
    default = float(descriptor.get("default", 0.0 if box.contains_interior(0.0) else box.lo + 1))

    support_fn = _support_function(descriptor["support"], theta, params, kind)

    density: Callable
    score = x_score = None
    if has_expression:
        expression = parse_expression(
            descriptor["density_expression"], {"x": x, parameter: theta}, params
        )
        density = _lambdify(expression, (x, theta))
        score_expression = sp.simplify(sp.diff(expression, theta) / expression)
        score = _vectorized(_lambdify(score_expression, (x, theta)))
        if kind == FamilyKind.CONTINUOUS:
            x_score_expression = sp.simplify(sp.diff(expression, x) / expression)
            x_score = _vectorized(_lambdify(x_score_expression, (x, theta)))
    else:
        try:
            function = import_callable(str(descriptor["density_callable"]))
        except (ImportError, AttributeError, TypeError, ValueError) as e:
            raise ParameterError(f"Cannot load the density of {name}: {e}") from e
        density = function

    registration = descriptor.get("registration_box")
    return ParametricFamily(
        name=name,
        kind=kind,
        param_space=space,
        pdf=lambda values, th: density(values, th[0]) if has_expression else density(values, th),
        support_fn=support_fn,
        default_theta=(default,),
        param_names=(parameter,),
        role=role,
        default_flavor=str(
            descriptor.get("flavor", "discrete" if kind == FamilyKind.DISCRETE else "generic")
        ),
        params=params,
        registration_box=None if registration is None else (Interval(*registration),),
        score=None if score is None else (lambda values, th: score(values, th[0])),
        x_score=None if x_score is None else (lambda values, th: x_score(values, th[0])),
    )


def _vectorized(function: Callable) -> Callable:
    def wrapped(values, value):
        with np.errstate(all="ignore"):
            result = np.asarray(function(values, value), dtype=float)
        return np.broadcast_to(result, np.shape(values)).copy()

    return wrapped


def _endpoint_value(value: Any, params: dict[str, float]) -> float:
    expression = parse_expression(value, {}, params)
    return float(expression)


def _support_function(
    support: Any,
    theta: sp.Symbol,
    params: dict[str, float],
    kind: FamilyKind,
) -> Callable:
    if not isinstance(support, (list, tuple)) or len(support) != 2:
        raise ParameterError(f"support must be a pair of endpoints, got {support!r}")
    endpoints = [
        _lambdify(parse_expression(value, {str(theta): theta}, params), (theta,), modules="math")
        for value in support
    ]

    if kind == FamilyKind.DISCRETE:
        return lambda th: IntRange(int(endpoints[0](th[0])), endpoints[1](th[0]))
    return lambda th: Interval(float(endpoints[0](th[0])), float(endpoints[1](th[0])))


def load_family(path: str | Path, register: bool = True) -> ParametricFamily:
    """Load a family descriptor from a JSON file.

    Args:
        path (str | Path): The descriptor file.
        register (bool, optional): Whether to register the family in the catalog.
            Defaults to True.

    Returns:
        ParametricFamily: The family.

    Raises:
        ParameterError: If the descriptor is invalid or the density is not normalized.
        OSError: If the file cannot be read.
    """
    descriptor = File(path).read()
    family = family_from_descriptor(descriptor)
    logger.info("Loaded family %s from %s", family.name, path)
    return register_family(family) if register else family
