"""
REST API
========

The REST API gateway will be: 127.0.0.1:5000/<COMMAND>

1. POST /solve - accepts the equation and the solver options inside the JSON
payload:
    {"input": "z^2 - x1 - x2", "precision": "6", "max_steps": 64,
     "first_vertical": true}

    On success: return JSON: {"status": "ok", "report": <SOLVE REPORT>}
                + code: 200

    On error: return JSON: {"status": "error", "reason": <REASON>,
                            "report": <ERROR REPORT>}
              + code: 422

2. POST /cone-check, /principalize, /minpoly, /integrality - same payload,
the input being generators, sets, a series or a polynomial. A negative answer
(not an S-cone, not integral) is still a successful request.

3. GET /health - returns {"status": "ok"}.

Malformed payloads return {"status": "error", "reason": "invalid request"}
with code 422.
"""

import logging
import os
from fractions import Fraction
from typing import Any, Literal

from flask import Flask, abort, jsonify, request
from flask.wrappers import Response
from pydantic import BaseModel, ConfigDict, Field, field_validator
from pydantic_core import ValidationError
from typing_extensions import Annotated

from puiseux_cone_solver.cli.cli_utils import (
    LOG_FORMAT,
    LOG_LEVEL,
    Command,
    ExitCode,
    JobConfig,
)
from puiseux_cone_solver.cli.runner import run
from puiseux_cone_solver.exceptions import ServerFailureReasonsEnum
from puiseux_cone_solver.solver.solver_utils import (
    DEFAULT_ITERATION_CAP,
    DEFAULT_MAX_STEPS,
    DEFAULT_PRECISION,
    to_fraction,
)

logger = logging.getLogger(__name__)

# Flask connection details
SERVER_RUN_HOST = os.environ.get("PUISEUX_SERVER_HOST", "127.0.0.1")
SERVER_RUN_PORT = int(os.environ.get("PUISEUX_SERVER_PORT", 5000))

# Commands served over POST
POST_COMMANDS = (
    Command.SOLVE,
    Command.CONE_CHECK,
    Command.PRINCIPALIZE,
    Command.MINPOLY,
    Command.INTEGRALITY,
)


class JobRequestModel(BaseModel):
    model_config = ConfigDict(
        frozen=True, extra="forbid", arbitrary_types_allowed=True
    )

    input: Annotated[str, Field(min_length=1)]
    precision: Fraction = DEFAULT_PRECISION
    max_steps: Annotated[int, Field(gt=0)] = DEFAULT_MAX_STEPS
    iteration_cap: Annotated[int, Field(gt=0)] = DEFAULT_ITERATION_CAP
    first_vertical: bool = True

    @field_validator("precision", mode="before")
    @classmethod
    def _coerce_precision(cls, value: Any) -> Fraction:
        return to_fraction(value)

    def to_job(self, command: Command) -> JobConfig:
        return JobConfig(
            command=command,
            precision=self.precision,
            max_steps=self.max_steps,
            iteration_cap=self.iteration_cap,
            first_vertical=self.first_vertical,
        )


# Flask app
def create_flask_app() -> Flask:
    app = Flask(__name__)
    app.register_error_handler(404, page_not_found)
    app.register_error_handler(405, page_not_found)
    app.register_error_handler(422, invalid_request)
    app.register_error_handler(500, internal_server_error)
    app.add_url_rule("/health", view_func=health, methods=["GET"])
    for command in POST_COMMANDS:
        app.add_url_rule(
            f"/{command.value}",
            endpoint=command.value,
            view_func=run_command,
            defaults={"command": command.value},
            methods=["POST"],
        )
    return app


def health() -> tuple[Response, Literal[200]]:
    return jsonify({"status": "ok"}), 200


def run_command(
    command: str,
) -> tuple[Response, Literal[200] | Literal[422]]:
    """
    Run one command on the JSON payload.

    Args:
        command: the command name, bound per route

    Returns:
        The report with code 200, or the error report with code 422 when the
        solver rejects the input.
    """
    request_data: dict[str, Any] = request.get_json(silent=True) or {}
    # validate the data using pydantic
    try:
        job_request = JobRequestModel.model_validate(request_data)
        job = job_request.to_job(Command(command))
    except ValidationError as e:
        return abort(422, str(e))

    result = run(job, job_request.input)
    report = result.report.model_dump(mode="json")
    if result.exit_code in (ExitCode.OK, ExitCode.NEGATIVE):
        return jsonify({"status": "ok", "report": report}), 200
    logger.info("%s failed with %s", command, report["reason"])
    return (
        jsonify(
            {"status": "error", "reason": report["reason"], "report": report}
        ),
        422,
    )


def page_not_found(e) -> tuple[Response, Literal[404]]:
    return (
        jsonify(
            {
                "status": "error",
                "reason": ServerFailureReasonsEnum.NO_SUCH_ENDPOINT,
            }
        ),
        404,
    )


def internal_server_error(e) -> tuple[Response, Literal[500]]:
    return (
        jsonify(
            {
                "status": "error",
                "reason": ServerFailureReasonsEnum.INTERNAL_SERVER_ERROR,
            }
        ),
        500,
    )


def invalid_request(e) -> tuple[Response, Literal[422]]:
    return (
        jsonify(
            {
                "status": "error",
                "reason": ServerFailureReasonsEnum.INVALID_REQUEST,
            }
        ),
        422,
    )


rest_app = create_flask_app()


if __name__ == "__main__":
    logging.basicConfig(format=LOG_FORMAT, level=LOG_LEVEL.upper())
    rest_app.run(host=SERVER_RUN_HOST, port=SERVER_RUN_PORT, debug=True)
