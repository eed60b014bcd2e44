"""
Utils for the Newton solver
===========================
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, field_validator
from typing_extensions import Annotated

# Solver defaults
DEFAULT_PRECISION = Fraction(8)
DEFAULT_MAX_STEPS = 64
DEFAULT_ITERATION_CAP = 10_000
DEFAULT_GUARD_PRECISION = Fraction(2)
DEFAULT_MAX_ESCALATIONS = 3


def to_fraction(value: Any) -> Fraction:
    """
    Read an exact rational from an int, a "p/q" string, a [p, q] pair or a
    Fraction. Floats are refused: every quantity in the solver is exact.
    """
    if isinstance(value, bool) or isinstance(value, float):
        raise ValueError(f"{value!r} is not an exact rational")
    if isinstance(value, (list, tuple)) and len(value) != 2:
        raise ValueError("Expected a [numerator, denominator] pair")
    try:
        if isinstance(value, (list, tuple)):
            return Fraction(int(value[0]), int(value[1]))
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise ValueError(f"{value!r} is not an exact rational") from e


class SolverConfig(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    precision: Fraction = DEFAULT_PRECISION
    max_steps: Annotated[int, Field(gt=0)] = DEFAULT_MAX_STEPS
    first_vertical: bool = True
    iteration_cap: Annotated[int, Field(gt=0)] = DEFAULT_ITERATION_CAP
    guard_precision: Fraction = DEFAULT_GUARD_PRECISION
    max_escalations: Annotated[int, Field(ge=0)] = DEFAULT_MAX_ESCALATIONS

    @field_validator("precision", "guard_precision", mode="before")
    @classmethod
    def _coerce_fraction(cls, value: Any) -> Fraction:
        return to_fraction(value)

    @field_validator("precision")
    @classmethod
    def _check_precision(cls, value: Fraction) -> Fraction:
        if value <= 0:
            raise ValueError("precision must be positive")
        return value

    @field_validator("guard_precision")
    @classmethod
    def _check_guard(cls, value: Fraction) -> Fraction:
        if value < 0:
            raise ValueError("guard precision must be non-negative")
        return value
