"""
Exponent lattice
================

Exponent vectors of Puiseux monomials x^a, a in (1/d)Z^n, stored as tuples of
exact rationals. The shared denominator d is a property of the containing
series, not of the vector.

Two orders are used throughout:

    . the lexicographic order, a total group order; the first differing
      coordinate decides.
    . the product order a << b, which holds iff a_i <= b_i for every i.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

from puiseux_cone_solver.exceptions import DimensionMismatchError
from puiseux_cone_solver.typing import ExponentVector, Rational


class LexOrdering(str, Enum):
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"


class ProductOrdering(str, Enum):
    LESS_EQUAL = "less-equal"
    GREATER_EQUAL = "greater-equal"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


def as_exponent_vector(coords: Iterable[Rational | str]) -> ExponentVector:
    return tuple(Fraction(c) for c in coords)


def zero_vector(n: int) -> ExponentVector:
    return (Fraction(0),) * n


def unit_vector(n: int, index: int) -> ExponentVector:
    """0-based ``index``."""
    return tuple(Fraction(int(k == index)) for k in range(n))


def check_same_dimension(a: Sequence, b: Sequence) -> None:
    if len(a) != len(b):
        raise DimensionMismatchError(
            f"Vectors of length {len(a)} and {len(b)} cannot be compared"
        )


def lex_compare(a: ExponentVector, b: ExponentVector) -> LexOrdering:
    check_same_dimension(a, b)
    for a_i, b_i in zip(a, b):
        if a_i < b_i:
            return LexOrdering.LESS
        if a_i > b_i:
            return LexOrdering.GREATER
    return LexOrdering.EQUAL


def product_compare(a: ExponentVector, b: ExponentVector) -> ProductOrdering:
    check_same_dimension(a, b)
    below = all(a_i <= b_i for a_i, b_i in zip(a, b))
    above = all(a_i >= b_i for a_i, b_i in zip(a, b))
    if below and above:
        return ProductOrdering.EQUAL
    if below:
        return ProductOrdering.LESS_EQUAL
    if above:
        return ProductOrdering.GREATER_EQUAL
    return ProductOrdering.INCOMPARABLE


def product_le(a: ExponentVector, b: ExponentVector) -> bool:
    return product_compare(a, b) in (
        ProductOrdering.LESS_EQUAL,
        ProductOrdering.EQUAL,
    )


def first_nonzero_sign(a: ExponentVector) -> int:
    for a_i in a:
        if a_i:
            return 1 if a_i > 0 else -1
    return 0


def is_lex_positive(a: ExponentVector) -> bool:
    return first_nonzero_sign(a) == 1


def first_nonzero_index(a: ExponentVector) -> int | None:
    return next((k for k, a_i in enumerate(a) if a_i), None)


def add_vectors(a: ExponentVector, b: ExponentVector) -> ExponentVector:
    check_same_dimension(a, b)
    return tuple(a_i + b_i for a_i, b_i in zip(a, b))


def sub_vectors(a: ExponentVector, b: ExponentVector) -> ExponentVector:
    check_same_dimension(a, b)
    return tuple(a_i - b_i for a_i, b_i in zip(a, b))


def total_degree(a: ExponentVector) -> Fraction:
    return sum(a, Fraction(0))


def is_nonnegative(a: ExponentVector) -> bool:
    return all(a_i >= 0 for a_i in a)


def common_denominator(vectors: Iterable[ExponentVector]) -> int:
    return math.lcm(1, *(c.denominator for a in vectors for c in a))


def minimal_elements(points: Iterable[ExponentVector]) -> list[ExponentVector]:
    """
    The product-order minimal elements of a finite set, in lex order.
    """
    unique = sorted(set(points))
    return [
        p
        for p in unique
        if not any(q != p and product_le(q, p) for q in unique)
    ]


@dataclass(frozen=True)
class LatticeSet:
    elements: frozenset[ExponentVector]
    n: int

    def __post_init__(self):
        for element in self.elements:
            if len(element) != self.n:
                raise DimensionMismatchError(
                    f"Element {element} does not live in dimension {self.n}"
                )
            if any(c.denominator != 1 for c in element):
                raise ValueError(
                    f"Element {element} does not have integer coordinates"
                )

    @classmethod
    def of(cls, points: Iterable[Iterable[Rational]]) -> LatticeSet:
        elements = frozenset(as_exponent_vector(p) for p in points)
        if not elements:
            raise ValueError("A lattice set needs at least one element")
        return cls(elements=elements, n=len(next(iter(elements))))

    def sorted(self) -> list[ExponentVector]:
        return sorted(self.elements)
