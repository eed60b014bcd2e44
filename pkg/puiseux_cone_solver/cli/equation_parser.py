"""
Equation parser
===============

Reads the text forms accepted on the command line and by the REST API:

    equations     z^2 - x1*x2,  z^3 + (1/2)*z*x1^(1/3) - x2
    series        x1^(1/2)*x2^(1/2) - 3/4*x1
    vectors       (0,-1,3), (1,0,0)
    sets          (1,0),(0,2); (2,1)

Variables are x1, ..., xN and z. Coefficients are exact rationals and
exponents of x are rationals (in parentheses when not integers); z only takes
non-negative integer powers. Expressions are expanded with sympy, so products
and powers of sums with integer exponents are fine.
"""

from __future__ import annotations

import logging
import re
from fractions import Fraction
from tokenize import TokenError

import sympy
from sympy.parsing.sympy_parser import parse_expr, standard_transformations

from puiseux_cone_solver.algebra.field import from_sympy
from puiseux_cone_solver.algebra.lattice import as_exponent_vector
from puiseux_cone_solver.algebra.series import Series, ZPolynomial
from puiseux_cone_solver.exceptions import (
    DimensionMismatchError,
    EquationSyntaxError,
    NotMonicError,
    ZeroConstantTermError,
)
from puiseux_cone_solver.typing import ExponentVector

logger = logging.getLogger(__name__)

_ALLOWED_CHARACTERS = set("0123456789xz+-*/^() \t\n")
_NAME = re.compile(r"[A-Za-z_]\w*")
_X_VARIABLE = re.compile(r"x([1-9]\d*)")
_VECTOR = re.compile(r"\(([^()]*)\)")


def _scan(text: str, allow_z: bool) -> int:
    """Check characters and names; returns the largest x index seen."""
    if not text.strip():
        raise EquationSyntaxError("Empty expression", 0)
    for position, character in enumerate(text):
        if character not in _ALLOWED_CHARACTERS:
            raise EquationSyntaxError(
                f"Unexpected character {character!r}", position
            )
    largest = 0
    for match in _NAME.finditer(text):
        name = match.group()
        if name == "z":
            if not allow_z:
                raise EquationSyntaxError(
                    "z is not allowed in a series", match.start()
                )
            continue
        variable = _X_VARIABLE.fullmatch(name)
        if variable is None:
            raise EquationSyntaxError(
                f"Unknown variable {name!r}", match.start()
            )
        largest = max(largest, int(variable.group(1)))
    return largest


def _to_sympy(text: str, n: int) -> sympy.Expr:
    symbols = {
        f"x{k}": sympy.Symbol(f"x{k}", positive=True) for k in range(1, n + 1)
    }
    symbols["z"] = sympy.Symbol("z", positive=True)
    try:
        expression = parse_expr(
            text.replace("^", "**"),
            local_dict=symbols,
            transformations=standard_transformations,
        )
    except (SyntaxError, TokenError) as e:
        offset = getattr(e, "offset", None)
        raise EquationSyntaxError(
            "Malformed expression",
            None if offset is None else max(offset - 1, 0),
        ) from e
    except (TypeError, ZeroDivisionError) as e:
        raise EquationSyntaxError(f"Cannot evaluate expression: {e}") from e
    if not isinstance(expression, sympy.Expr):
        raise EquationSyntaxError("Not an algebraic expression")
    if expression.has(sympy.zoo, sympy.nan, sympy.oo):
        raise EquationSyntaxError("Division by zero")
    return sympy.expand(expression)


def _collect(
    expression: sympy.Expr, n: int
) -> dict[int, dict[ExponentVector, Fraction]]:
    """Split an expanded expression into {z-degree: {x-exponent: coeff}}."""
    collected: dict[int, dict[ExponentVector, Fraction]] = {}
    for term in sympy.Add.make_args(expression):
        if term == 0:
            continue
        coefficient, factors = term.as_coeff_mul()
        if not coefficient.is_Rational:
            raise EquationSyntaxError(f"Coefficient {coefficient} is inexact")
        exponent = [Fraction(0)] * n
        z_degree = 0
        for factor in factors:
            base, power = factor.as_base_exp()
            if not isinstance(base, sympy.Symbol) or not power.is_Rational:
                raise EquationSyntaxError(
                    f"{factor} is not a monomial with rational exponent"
                )
            power = from_sympy(power)
            if base.name == "z":
                if power.denominator != 1 or power < 0:
                    raise EquationSyntaxError(
                        f"z has to carry a non-negative integer power, got"
                        f" {power}"
                    )
                z_degree += int(power)
            else:
                exponent[int(base.name[1:]) - 1] += power
        layer = collected.setdefault(z_degree, {})
        key = tuple(exponent)
        layer[key] = layer.get(key, Fraction(0)) + from_sympy(coefficient)
    return collected


def _dimension(largest: int, n: int | None) -> int:
    if n is None:
        return max(largest, 1)
    if largest > n:
        raise DimensionMismatchError(
            f"Expression uses x{largest} but only {n} variables are declared"
        )
    return n


def parse_equation(
    text: str, n: int | None = None, monic: bool = False
) -> ZPolynomial:
    """
    Parse a polynomial in z with Puiseux series coefficients.

    Args:
        text: the equation, e.g. "z^2 - x1*x2"
        n: number of x variables, inferred from the largest index when None
        monic: require leading coefficient 1 and a non-zero constant term,
            as the solver does

    Returns:
        The polynomial, coefficients stored constant term first.
    """
    n = _dimension(_scan(text, allow_z=True), n)
    collected = _collect(_to_sympy(text, n), n)
    degree = max(collected, default=0)
    polynomial = ZPolynomial(
        [Series(n, collected.get(k, {})) for k in range(degree + 1)], n
    )
    if monic:
        if polynomial.degree < 1 or not polynomial.is_monic():
            raise NotMonicError(f"{text!r} is not monic in z")
        if polynomial.coefficient(0).is_exactly_zero():
            raise ZeroConstantTermError(f"{text!r} has zero constant term")
    logger.debug("parsed %r as degree %d in z", text, polynomial.degree)
    return polynomial


def parse_series(text: str, n: int | None = None) -> Series:
    n = _dimension(_scan(text, allow_z=False), n)
    collected = _collect(_to_sympy(text, n), n)
    return Series(n, collected.get(0, {}))


def _parse_coordinate(entry: str, position: int) -> Fraction:
    try:
        return Fraction(entry.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise EquationSyntaxError(
            f"{entry.strip()!r} is not a rational coordinate", position
        ) from e


def parse_vectors(text: str, offset: int = 0) -> list[ExponentVector]:
    """Parse "(a1,...,an), (b1,...,bn), ..." into exponent vectors."""
    vectors = []
    cursor = 0
    for match in _VECTOR.finditer(text):
        gap = text[cursor : match.start()]
        stray = next(
            (k for k, c in enumerate(gap) if c not in ", \t\n"), None
        )
        if stray is not None:
            raise EquationSyntaxError(
                f"Unexpected {gap[stray]!r}", offset + cursor + stray
            )
        vectors.append(
            as_exponent_vector(
                _parse_coordinate(entry, offset + match.start(1))
                for entry in match.group(1).split(",")
            )
        )
        cursor = match.end()
    if text[cursor:].strip(", \t\n"):
        raise EquationSyntaxError("Unterminated vector", offset + cursor)
    if not vectors:
        raise EquationSyntaxError("No vectors given", offset)
    if len({len(v) for v in vectors}) > 1:
        raise DimensionMismatchError("Vectors of different lengths")
    return vectors


def parse_sets(text: str) -> list[list[ExponentVector]]:
    """Parse ';'-separated vector lists."""
    sets = []
    offset = 0
    for chunk in text.split(";"):
        sets.append(parse_vectors(chunk, offset))
        offset += len(chunk) + 1
    return sets
