"""
Command line
============

    puiseux-cone solve "z^2 - x1 - x2" --precision 6 --format json
    puiseux-cone cone-check "(1,0,0), (0,-1,3)"
    puiseux-cone principalize "(2,0),(0,3); (1,1)"
    puiseux-cone minpoly "x1^(1/2)*x2^(1/2) + x1"
    puiseux-cone integrality "z^2 - x1*(1 - x1/x2)"
    puiseux-cone selftest --seed 7

The input is read from the positional argument or, when absent, from stdin.
The process exits with the code of ``cli_utils.ExitCode``.
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Sequence, TextIO

from pydantic_core import ValidationError

from puiseux_cone_solver.cli.cli_utils import (
    LOG_FORMAT,
    LOG_LEVEL,
    Command,
    ExitCode,
    JobConfig,
    OutputFormat,
)
from puiseux_cone_solver.cli.runner import run
from puiseux_cone_solver.solver.solver_utils import (
    DEFAULT_ITERATION_CAP,
    DEFAULT_MAX_STEPS,
    DEFAULT_PRECISION,
)

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="puiseux-cone",
        description=(
            "Puiseux roots of monic polynomials over power series, with"
            " S-cone certificates."
        ),
    )
    parser.add_argument(
        "command", choices=[command.value for command in Command]
    )
    parser.add_argument(
        "input",
        nargs="?",
        default=None,
        help="equation, series, vectors or sets; read from stdin if absent",
    )
    parser.add_argument(
        "--precision",
        default=str(DEFAULT_PRECISION),
        help="total degree below which roots are exact, a rational p/q",
    )
    parser.add_argument("--max-steps", type=int, default=DEFAULT_MAX_STEPS)
    parser.add_argument(
        "--iteration-cap", type=int, default=DEFAULT_ITERATION_CAP
    )
    parser.add_argument(
        "--no-vertical-first",
        dest="first_vertical",
        action="store_false",
        help="skip the vertical first step, keep roots of positive order",
    )
    parser.add_argument(
        "--format",
        dest="output_format",
        choices=[f.value for f in OutputFormat],
        default=OutputFormat.TEXT.value,
    )
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--log-level", default=LOG_LEVEL)
    return parser


def main(
    argv: Sequence[str] | None = None,
    stdin: TextIO | None = None,
    stdout: TextIO | None = None,
) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    logging.basicConfig(format=LOG_FORMAT, level=args.log_level.upper())

    try:
        cfg = JobConfig.model_validate(
            {
                "command": args.command,
                "precision": args.precision,
                "max_steps": args.max_steps,
                "iteration_cap": args.iteration_cap,
                "first_vertical": args.first_vertical,
                "output_format": args.output_format,
                "seed": args.seed,
            }
        )
    except ValidationError as e:
        print(f"invalid configuration: {e}", file=sys.stderr)
        return ExitCode.INVALID_INPUT

    text = args.input
    if text is None and cfg.command is not Command.SELFTEST:
        text = stdin.read()
    result = run(cfg, (text or "").strip())

    if cfg.output_format is OutputFormat.JSON:
        stdout.write(result.report.model_dump_json(indent=2) + "\n")
    else:
        stdout.write(result.report.to_text() + "\n")
    return int(result.exit_code)


if __name__ == "__main__":
    raise SystemExit(main())
