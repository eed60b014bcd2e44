from fractions import Fraction
from typing import TypeAlias

Rational: TypeAlias = Fraction | int
ExponentVector: TypeAlias = tuple[Fraction, ...]
MatrixRows: TypeAlias = tuple[tuple[int, ...], ...]
ElementaryStep: TypeAlias = tuple[int, int, int]
Precision: TypeAlias = Fraction | None
