"""
Runner
======

``run(cfg, text)`` executes one job and returns its report together with the
process exit code. Both the CLI and the REST API go through it.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass

from puiseux_cone_solver.algebra.blowup import inverse, principalize
from puiseux_cone_solver.algebra.cone import (
    Cone,
    bring_to_first_quadrant,
    is_s_cone,
    s_cone_witness,
)
from puiseux_cone_solver.algebra.series import (
    ZPolynomial,
    format_series,
    format_zpolynomial,
)
from puiseux_cone_solver.cli.cli_utils import (
    SELFTEST_DEGREE,
    SELFTEST_VARIABLES,
    Command,
    ExitCode,
    JobConfig,
    exit_code_for,
)
from puiseux_cone_solver.cli.equation_parser import (
    parse_equation,
    parse_series,
    parse_sets,
    parse_vectors,
)
from puiseux_cone_solver.cli.reports import (
    ConeCheckReport,
    ErrorReport,
    IntegralityReport,
    MinpolyReport,
    PrincipalizeReport,
    Report,
    RootReport,
    SelftestReport,
    SolveReport,
    vector_pairs,
)
from puiseux_cone_solver.exceptions import (
    PuiseuxError,
    SolverFailureReasonsEnum,
)
from puiseux_cone_solver.solver.closure import (
    ConeRingElement,
    integrality_witness,
    minimal_polynomial,
    planted_instance,
    recovered,
    solve_over_cone_ring,
)
from puiseux_cone_solver.solver.newton import (
    PuiseuxRoot,
    merge_certificates,
    solve,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RunResult:
    report: Report
    exit_code: ExitCode


def _solve_any_support(
    polynomial: ZPolynomial, cfg: JobConfig
) -> list[PuiseuxRoot]:
    """
    Power series coefficients go straight to the solver; coefficients with
    support in an S-cone are solved over the cone ring of that cone.
    """
    config = cfg.to_solver_config()
    if all(c.has_nonnegative_support() for c in polynomial.coefficients):
        return solve(polynomial, config)
    support = {a for c in polynomial.coefficients for a in c.terms if any(a)}
    reduction = bring_to_first_quadrant(
        Cone.of(sorted(support)), cfg.iteration_cap
    ).reduction
    cone = inverse(reduction)
    return solve_over_cone_ring(
        [
            ConeRingElement(series=c, cone=cone, d=c.denominator)
            for c in polynomial.coefficients
        ],
        config,
    )


def _run_solve(cfg: JobConfig, text: str) -> RunResult:
    polynomial = parse_equation(text, monic=True)
    roots = _solve_any_support(polynomial, cfg)
    report = SolveReport.of(
        polynomial, roots, merge_certificates(roots, cfg.iteration_cap)
    )
    return RunResult(report=report, exit_code=ExitCode.OK)


def _run_cone_check(cfg: JobConfig, text: str) -> RunResult:
    cone = Cone.of(parse_vectors(text))
    generators = [vector_pairs(g) for g in cone.generators]
    if not is_s_cone(cone):
        report = ConeCheckReport(
            generators=generators,
            is_s_cone=False,
            witness=vector_pairs(s_cone_witness(cone)),
        )
        return RunResult(report=report, exit_code=ExitCode.NEGATIVE)
    certificate = bring_to_first_quadrant(cone, cfg.iteration_cap)
    report = ConeCheckReport(
        generators=generators,
        is_s_cone=True,
        reduction=certificate.reduction.to_lists(),
        steps=list(certificate.steps),
    )
    return RunResult(report=report, exit_code=ExitCode.OK)


def _run_principalize(cfg: JobConfig, text: str) -> RunResult:
    result = principalize(parse_sets(text), cfg.iteration_cap)
    report = PrincipalizeReport(
        map=result.map.to_lists(),
        apexes=[vector_pairs(a) for a in result.apexes],
        steps=list(result.steps),
    )
    return RunResult(report=report, exit_code=ExitCode.OK)


def _run_minpoly(cfg: JobConfig, text: str) -> RunResult:
    f = parse_series(text)
    report = MinpolyReport.of(f, minimal_polynomial(f))
    return RunResult(report=report, exit_code=ExitCode.OK)


def _run_integrality(cfg: JobConfig, text: str) -> RunResult:
    # a bare series is replaced by its minimal polynomial
    if "z" in text:
        polynomial = parse_equation(text)
    else:
        polynomial = minimal_polynomial(parse_series(text))
    witness = integrality_witness(polynomial)
    report = IntegralityReport(
        polynomial=format_zpolynomial(polynomial),
        integral=witness is None,
        witness=None if witness is None else vector_pairs(witness),
    )
    exit_code = ExitCode.OK if witness is None else ExitCode.NEGATIVE
    return RunResult(report=report, exit_code=exit_code)


def _run_selftest(cfg: JobConfig, text: str) -> RunResult:
    instance = planted_instance(
        random.Random(cfg.seed), SELFTEST_VARIABLES, SELFTEST_DEGREE
    )
    roots = solve_over_cone_ring(
        instance.coefficients(), cfg.to_solver_config()
    )
    found = recovered(instance, roots, cfg.precision)
    report = SelftestReport(
        seed=cfg.seed,
        equation=format_zpolynomial(instance.polynomial),
        planted_certificate=instance.certificate.to_lists(),
        planted_roots=[format_series(r) for r in instance.roots],
        recovered=found,
        roots=[RootReport.of(root) for root in roots],
    )
    return RunResult(
        report=report, exit_code=ExitCode.OK if found else ExitCode.NEGATIVE
    )


_COMMANDS = {
    Command.SOLVE: _run_solve,
    Command.CONE_CHECK: _run_cone_check,
    Command.PRINCIPALIZE: _run_principalize,
    Command.MINPOLY: _run_minpoly,
    Command.INTEGRALITY: _run_integrality,
    Command.SELFTEST: _run_selftest,
}


def run(cfg: JobConfig, text: str = "") -> RunResult:
    """
    Run one job.

    Args:
        cfg: the validated job configuration
        text: the equation, series, vectors or sets the command reads

    Returns:
        The report and the exit code; failures become error reports whose
        reason decides the code.
    """
    logger.info("running %s", cfg.command.value)
    try:
        return _COMMANDS[cfg.command](cfg, text)
    except PuiseuxError as e:
        logger.info("%s failed: %s", cfg.command.value, e)
        return RunResult(
            report=ErrorReport(
                command=cfg.command, reason=e.reason.value, detail=str(e)
            ),
            exit_code=exit_code_for(e.reason),
        )
    except ValueError as e:
        logger.info("%s rejected its input: %s", cfg.command.value, e)
        return RunResult(
            report=ErrorReport(
                command=cfg.command,
                reason=SolverFailureReasonsEnum.INVALID_INPUT.value,
                detail=str(e),
            ),
            exit_code=ExitCode.INVALID_INPUT,
        )
