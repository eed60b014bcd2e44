"""
Coefficient field
=================

The base field is the field of exact rationals. Elements are
``fractions.Fraction`` values, always in lowest terms with a positive
denominator.

The only non-arithmetic service the solver needs from the field is a root
oracle for univariate polynomials. Over the rationals it factors the
polynomial with sympy and reports the linear factors; anything that does not
split is handed back as ``UnsplittableError`` rather than approximated.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import sympy
from sympy import Poly

from puiseux_cone_solver.exceptions import UnsplittableError
from puiseux_cone_solver.typing import Rational

FieldElement = Fraction

_ALPHA = sympy.Symbol("alpha")


def add(a: Rational, b: Rational) -> FieldElement:
    return Fraction(a) + Fraction(b)


def mul(a: Rational, b: Rational) -> FieldElement:
    return Fraction(a) * Fraction(b)


def negate(a: Rational) -> FieldElement:
    return -Fraction(a)


def invert(a: Rational) -> FieldElement:
    if a == 0:
        raise ZeroDivisionError("Cannot invert zero in the coefficient field")
    return 1 / Fraction(a)


def equals(a: Rational, b: Rational) -> bool:
    return Fraction(a) == Fraction(b)


def from_sympy(value: sympy.Expr) -> FieldElement:
    rational = sympy.Rational(value)
    return Fraction(int(rational.p), int(rational.q))


@dataclass(frozen=True)
class UnivariatePoly:
    """Dense coefficients, constant term first."""

    coefficients: tuple[FieldElement, ...]

    def __post_init__(self):
        coefficients = [Fraction(c) for c in self.coefficients]
        while coefficients and coefficients[-1] == 0:
            coefficients.pop()
        object.__setattr__(self, "coefficients", tuple(coefficients))

    @classmethod
    def of(cls, coefficients: Iterable[Rational]) -> UnivariatePoly:
        return cls(coefficients=tuple(Fraction(c) for c in coefficients))

    @classmethod
    def from_sympy(cls, poly: Poly) -> UnivariatePoly:
        return cls.of(from_sympy(c) for c in reversed(poly.all_coeffs()))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return not self.coefficients

    def evaluate(self, value: Rational) -> FieldElement:
        result = Fraction(0)
        for c in reversed(self.coefficients):
            result = result * value + c
        return result

    def to_sympy(self) -> Poly:
        return Poly(
            [sympy.Rational(c.numerator, c.denominator)
             for c in reversed(self.coefficients)],
            _ALPHA,
            domain="QQ",
        )

    def __str__(self) -> str:
        return str(self.to_sympy().as_expr())


def univariate_roots(p: UnivariatePoly) -> list[tuple[FieldElement, int]]:
    """
    All roots of ``p`` in the rationals with their multiplicities, largest
    root first.

    Raises:
        UnsplittableError: when a factor of degree > 1 remains; it carries the
            unsplit factor and the roots found so far.
    """
    if p.degree < 1:
        raise ValueError("A root oracle needs a polynomial of degree >= 1")
    _, factors = p.to_sympy().factor_list()
    roots: list[tuple[FieldElement, int]] = []
    unsplit = Poly(1, _ALPHA, domain="QQ")
    for factor, multiplicity in factors:
        if factor.degree() == 1:
            a, b = factor.all_coeffs()
            roots.append((from_sympy(-b / a), multiplicity))
        else:
            unsplit *= factor**multiplicity
    roots.sort(key=lambda pair: pair[0], reverse=True)

    for root, _ in roots:
        assert p.evaluate(root) == 0, f"{root} is not a root of {p}"
    if unsplit.degree() > 0:
        raise UnsplittableError(
            f"{p} does not split over the rationals; unsplit factor"
            f" {unsplit.as_expr()}",
            factor=UnivariatePoly.from_sympy(unsplit),
            roots=roots,
        )
    return roots
