"""
Reports
=======

Pydantic models of everything the CLI and the REST API emit. Rationals are
exact ``[numerator, denominator]`` pairs, never floats, and a series is a
list of terms ``{"num", "den", "exponents"}`` ordered by total degree, so a
report reproduces the internal objects exactly (``series_from_terms``).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Literal

from pydantic import BaseModel, ConfigDict

from puiseux_cone_solver.algebra.blowup import MonomialMap
from puiseux_cone_solver.algebra.series import (
    Series,
    ZPolynomial,
    display_order,
    format_series,
    format_zpolynomial,
)
from puiseux_cone_solver.cli.cli_utils import (
    EXACT,
    REPORT_SCHEMA_VERSION,
    Command,
)
from puiseux_cone_solver.solver.newton import PuiseuxRoot, StepRecord
from puiseux_cone_solver.typing import ExponentVector, Precision

RationalPair = tuple[int, int]
Matrix = list[list[int]]


def rational_pair(value: Fraction) -> RationalPair:
    return (value.numerator, value.denominator)


def vector_pairs(a: ExponentVector) -> list[RationalPair]:
    return [rational_pair(c) for c in a]


def precision_report(value: Precision) -> RationalPair | Literal["exact"]:
    return EXACT if value is None else rational_pair(value)


class TermReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    num: int
    den: int
    exponents: list[RationalPair]


def terms_report(f: Series) -> list[TermReport]:
    ordered = display_order(f)
    return [
        TermReport(
            num=c.numerator, den=c.denominator, exponents=vector_pairs(a)
        )
        for a, c in ordered
    ]


def series_from_terms(
    terms: list[TermReport], n: int, precision: Precision = None
) -> Series:
    return Series(
        n,
        {
            tuple(Fraction(p, q) for p, q in term.exponents): Fraction(
                term.num, term.den
            )
            for term in terms
        },
        precision,
    )


class _Report(BaseModel):
    model_config = ConfigDict(frozen=True)

    schema_version: int = REPORT_SCHEMA_VERSION
    status: Literal["ok", "error"] = "ok"
    command: Command

    def to_text(self) -> str:
        return self.model_dump_json(indent=2)


class StepReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: str
    depth: int
    gamma: RationalPair | None = None
    beta: RationalPair | None = None
    alpha: list[TermReport] | None = None
    blowups: list[tuple[int, int, int]] = []
    accumulated_map: Matrix

    @classmethod
    def of(cls, step: StepRecord) -> StepReport:
        return cls(
            kind=step.kind.value,
            depth=step.depth,
            gamma=None if step.gamma is None else rational_pair(step.gamma),
            beta=None if step.beta is None else rational_pair(step.beta),
            alpha=None if step.alpha is None else terms_report(step.alpha),
            blowups=list(step.blowups),
            accumulated_map=step.accumulated_map.to_lists(),
        )

    def describe(self) -> str:
        parts = [self.kind]
        if self.gamma is not None:
            parts.append(f"gamma={_pair_text(self.gamma)}")
        if self.blowups:
            parts.append(
                "blowups="
                + ",".join(f"phi{i}{j}^{e}" for i, j, e in self.blowups)
            )
        return " ".join(parts)


class RootReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    series: str
    terms: list[TermReport]
    denominator: int
    precision: RationalPair | Literal["exact"]
    residual_floor: RationalPair | Literal["exact"]
    accumulated_map: Matrix
    certificate: Matrix
    branch_log: list[StepReport]

    @classmethod
    def of(cls, root: PuiseuxRoot) -> RootReport:
        return cls(
            series=format_series(root.series),
            terms=terms_report(root.series),
            denominator=root.denominator,
            precision=precision_report(root.precision),
            residual_floor=precision_report(root.residual_floor),
            accumulated_map=root.accumulated_map.to_lists(),
            certificate=root.certificate.to_lists(),
            branch_log=[StepReport.of(step) for step in root.steps],
        )


def _pair_text(value: RationalPair | str) -> str:
    if isinstance(value, str):
        return value
    p, q = value
    return str(p) if q == 1 else f"{p}/{q}"


def _root_lines(index: int, root: RootReport) -> list[str]:
    return [
        f"root {index}: {root.series}",
        f"  denominator: {root.denominator}",
        f"  precision: {_pair_text(root.precision)}",
        f"  residual floor: {_pair_text(root.residual_floor)}",
        f"  certificate: {root.certificate}",
        "  steps: " + "; ".join(s.describe() for s in root.branch_log),
    ]


class SolveReport(_Report):
    command: Command = Command.SOLVE
    equation: str
    n: int
    degree: int
    roots: list[RootReport]
    global_certificate: Matrix

    @classmethod
    def of(
        cls,
        polynomial: ZPolynomial,
        roots: list[PuiseuxRoot],
        global_certificate: MonomialMap,
    ) -> SolveReport:
        return cls(
            equation=format_zpolynomial(polynomial),
            n=polynomial.n,
            degree=polynomial.degree,
            roots=[RootReport.of(root) for root in roots],
            global_certificate=global_certificate.to_lists(),
        )

    def to_text(self) -> str:
        lines = [f"equation: {self.equation}", f"roots: {len(self.roots)}"]
        for index, root in enumerate(self.roots, start=1):
            lines.extend(_root_lines(index, root))
        lines.append(f"global certificate: {self.global_certificate}")
        return "\n".join(lines)


class ConeCheckReport(_Report):
    command: Command = Command.CONE_CHECK
    generators: list[list[RationalPair]]
    is_s_cone: bool
    witness: list[RationalPair] | None = None
    reduction: Matrix | None = None
    steps: list[tuple[int, int, int]] = []

    def to_text(self) -> str:
        if not self.is_s_cone:
            return (
                "not an S-cone, witness: "
                f"({', '.join(_pair_text(c) for c in self.witness or [])})"
            )
        return "\n".join(
            [
                "S-cone",
                f"reduction: {self.reduction}",
                "bursts: "
                + ", ".join(f"phi{i}{j}^{e}" for i, j, e in self.steps),
            ]
        )


class PrincipalizeReport(_Report):
    command: Command = Command.PRINCIPALIZE
    map: Matrix
    apexes: list[list[RationalPair]]
    steps: list[tuple[int, int, int]]

    def to_text(self) -> str:
        apexes = "; ".join(
            "(" + ", ".join(_pair_text(c) for c in apex) + ")"
            for apex in self.apexes
        )
        return f"map: {self.map}\napexes: {apexes}"


class MinpolyReport(_Report):
    command: Command = Command.MINPOLY
    series: str
    denominator: int
    degree: int
    polynomial: str
    coefficients: list[list[TermReport]]

    @classmethod
    def of(cls, f: Series, minpoly: ZPolynomial) -> MinpolyReport:
        return cls(
            series=format_series(f),
            denominator=f.denominator,
            degree=minpoly.degree,
            polynomial=format_zpolynomial(minpoly),
            coefficients=[terms_report(c) for c in minpoly.coefficients],
        )

    def to_text(self) -> str:
        return f"minimal polynomial: {self.polynomial}"


class IntegralityReport(_Report):
    command: Command = Command.INTEGRALITY
    polynomial: str
    integral: bool
    witness: list[RationalPair] | None = None

    def to_text(self) -> str:
        if self.integral:
            return "integral"
        return (
            "not integral, witness exponent: "
            f"({', '.join(_pair_text(c) for c in self.witness or [])})"
        )


class SelftestReport(_Report):
    command: Command = Command.SELFTEST
    seed: int
    equation: str
    planted_certificate: Matrix
    planted_roots: list[str]
    recovered: bool
    roots: list[RootReport]

    def to_text(self) -> str:
        lines = [
            f"seed: {self.seed}",
            f"equation: {self.equation}",
            f"planted certificate: {self.planted_certificate}",
            "recovered" if self.recovered else "NOT recovered",
        ]
        for index, root in enumerate(self.roots, start=1):
            lines.extend(_root_lines(index, root))
        return "\n".join(lines)


class ErrorReport(_Report):
    status: Literal["ok", "error"] = "error"
    reason: str
    detail: str

    def to_text(self) -> str:
        return f"error: {self.reason}: {self.detail}"


Report = (
    SolveReport
    | ConeCheckReport
    | PrincipalizeReport
    | MinpolyReport
    | IntegralityReport
    | SelftestReport
    | ErrorReport
)
