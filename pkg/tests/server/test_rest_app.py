from unittest import mock

import pytest

from puiseux_cone_solver.cli.cli_utils import Command
from puiseux_cone_solver.cli.runner import run
from puiseux_cone_solver.server.rest_app import (
    JobRequestModel,
    create_flask_app,
)


@pytest.fixture
def client():
    return create_flask_app().test_client()


class TestRestApp:
    def test_health(self, client):
        response = client.get("/health")
        assert response.status_code == 200
        assert response.get_json() == {"status": "ok"}

    def test_solve(self, client):
        response = client.post("/solve", json={"input": "z^2 - x1*x2"})
        assert response.status_code == 200
        body = response.get_json()
        assert body["status"] == "ok"
        assert [root["series"] for root in body["report"]["roots"]] == [
            "x1^(1/2)*x2^(1/2)",
            "-x1^(1/2)*x2^(1/2)",
        ]

    def test_negative_answer_is_a_success(self, client):
        response = client.post("/cone-check", json={"input": "(0,-1), (1,0)"})
        assert response.status_code == 200
        assert response.get_json()["report"]["is_s_cone"] is False

    def test_solver_failure(self, client):
        response = client.post("/solve", json={"input": "z^2 + 1"})
        assert response.status_code == 422
        body = response.get_json()
        assert body["status"] == "error"
        assert body["reason"] == "characteristic equation does not split"
        assert body["report"]["command"] == "solve"

    @pytest.mark.parametrize(
        "payload",
        [
            {},
            {"input": ""},
            {"input": "z - x1", "precision": 0.5},
            {"input": "z - x1", "precision": "0"},
            {"input": "z - x1", "precision": [1, 0]},
            {"input": "z - x1", "max_steps": 0},
            {"input": "z - x1", "colour": "blue"},
        ],
    )
    def test_invalid_request(self, client, payload):
        response = client.post("/solve", json=payload)
        assert response.status_code == 422
        assert response.get_json() == {
            "status": "error",
            "reason": "invalid request",
        }

    def test_options_reach_the_runner(self, client):
        with mock.patch(
            "puiseux_cone_solver.server.rest_app.run", wraps=run
        ) as mocked:
            response = client.post(
                "/minpoly",
                json={"input": "x1^(1/2)", "precision": "13/2"},
            )
        assert response.status_code == 200
        mocked.assert_called_once()
        cfg, text = mocked.call_args.args
        assert cfg.command is Command.MINPOLY
        assert cfg.precision == 6.5
        assert text == "x1^(1/2)"
        assert response.get_json()["report"]["polynomial"] == "z^2 - x1"

    def test_unknown_endpoint(self, client):
        for response in (client.get("/factor"), client.get("/solve")):
            assert response.status_code == 404
            assert response.get_json()["reason"] == "no such endpoint"

    def test_internal_error(self, client):
        with mock.patch(
            "puiseux_cone_solver.server.rest_app.run",
            side_effect=RuntimeError("boom"),
        ):
            response = client.post("/solve", json={"input": "z - x1"})
        assert response.status_code == 500
        assert response.get_json()["reason"] == "internal server error"


class TestJobRequestModel:
    def test_to_job(self):
        job = JobRequestModel(input="z - x1", precision=[7, 2]).to_job(
            Command.SOLVE
        )
        assert job.command is Command.SOLVE
        assert job.precision * 2 == 7
        assert job.first_vertical
