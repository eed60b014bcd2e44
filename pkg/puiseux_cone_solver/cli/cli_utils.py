"""
Utils for the command line front end
====================================
"""

from __future__ import annotations

import os
from enum import Enum, IntEnum
from fractions import Fraction
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, field_validator
from typing_extensions import Annotated

from puiseux_cone_solver.exceptions import SolverFailureReasonsEnum
from puiseux_cone_solver.solver.solver_utils import (
    DEFAULT_GUARD_PRECISION,
    DEFAULT_ITERATION_CAP,
    DEFAULT_MAX_ESCALATIONS,
    DEFAULT_MAX_STEPS,
    DEFAULT_PRECISION,
    SolverConfig,
    to_fraction,
)

# Report details
REPORT_SCHEMA_VERSION = 1
EXACT = "exact"

# Logging
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
LOG_LEVEL = os.environ.get("PUISEUX_LOG_LEVEL", "WARNING")

# Planted instance used by ``selftest``
SELFTEST_VARIABLES = 2
SELFTEST_DEGREE = 2


class Command(str, Enum):
    SOLVE = "solve"
    CONE_CHECK = "cone-check"
    PRINCIPALIZE = "principalize"
    MINPOLY = "minpoly"
    INTEGRALITY = "integrality"
    SELFTEST = "selftest"


class OutputFormat(str, Enum):
    TEXT = "text"
    JSON = "json"


class ExitCode(IntEnum):
    OK = 0
    NEGATIVE = 1
    INVALID_INPUT = 2
    UNSPLITTABLE = 3
    MULTIPLE_ROOT = 4
    CAP_EXCEEDED = 5
    PRECISION_NOT_REACHED = 6


EXIT_CODES = {
    SolverFailureReasonsEnum.UNSPLITTABLE: ExitCode.UNSPLITTABLE,
    SolverFailureReasonsEnum.MULTIPLE_ROOT: ExitCode.MULTIPLE_ROOT,
    SolverFailureReasonsEnum.CAP_EXCEEDED: ExitCode.CAP_EXCEEDED,
    SolverFailureReasonsEnum.MAX_STEPS_EXCEEDED: ExitCode.CAP_EXCEEDED,
    SolverFailureReasonsEnum.PRECISION_NOT_REACHED: (
        ExitCode.PRECISION_NOT_REACHED
    ),
}


def exit_code_for(reason: SolverFailureReasonsEnum) -> ExitCode:
    return EXIT_CODES.get(reason, ExitCode.INVALID_INPUT)


class JobConfig(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    command: Command
    precision: Fraction = DEFAULT_PRECISION
    max_steps: Annotated[int, Field(gt=0)] = DEFAULT_MAX_STEPS
    first_vertical: bool = True
    output_format: OutputFormat = OutputFormat.TEXT
    seed: int = 0
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

    def to_solver_config(self) -> SolverConfig:
        return SolverConfig(
            precision=self.precision,
            max_steps=self.max_steps,
            first_vertical=self.first_vertical,
            iteration_cap=self.iteration_cap,
            guard_precision=self.guard_precision,
            max_escalations=self.max_escalations,
        )
