import io
import json

import pytest

from puiseux_cone_solver.cli.main import build_parser, main


def run_main(*argv, stdin=""):
    stdout = io.StringIO()
    code = main(list(argv), stdin=io.StringIO(stdin), stdout=stdout)
    return code, stdout.getvalue()


class TestMain:
    def test_solve_json(self):
        code, output = run_main("solve", "z^2 - x1*x2", "--format", "json")
        assert code == 0
        report = json.loads(output)
        assert report["schema_version"] == 1
        assert report["status"] == "ok"
        assert report["command"] == "solve"
        assert [root["series"] for root in report["roots"]] == [
            "x1^(1/2)*x2^(1/2)",
            "-x1^(1/2)*x2^(1/2)",
        ]

    def test_input_from_stdin(self):
        code, output = run_main("minpoly", stdin="x1^(1/2)\n")
        assert code == 0
        assert output == "minimal polynomial: z^2 - x1\n"

    def test_text_output(self):
        code, output = run_main("solve", "z^2 - x1 - x2", "--precision", "6")
        assert code == 0
        assert output.startswith("equation: z^2 - x1 - x2\nroots: 2\n")
        assert "segment gamma=1 blowups=phi12^1" in output

    def test_negative_answer(self):
        code, output = run_main("cone-check", "(0,-1), (1,0)")
        assert code == 1
        assert output.startswith("not an S-cone")

    def test_error_exit_code(self):
        code, output = run_main("solve", "z^2 + 1", "--format", "json")
        assert code == 3
        assert json.loads(output)["status"] == "error"

    def test_max_steps_flag(self):
        code, _ = run_main(
            "solve", "z^2 - x1 - x2", "--precision", "6", "--max-steps", "1"
        )
        assert code == 5

    def test_positive_order_roots(self):
        code, output = run_main(
            "solve", "(z - x1)*(z - 1)", "--no-vertical-first"
        )
        assert code == 0
        assert "roots: 1" in output

    def test_selftest_reads_no_input(self):
        code, output = run_main("selftest", "--seed", "7", "--precision", "6")
        assert code == 0
        assert "recovered" in output

    def test_invalid_precision(self, capsys):
        code, output = run_main("solve", "z^2 - x1", "--precision", "p")
        assert code == 2
        assert output == ""
        assert "invalid configuration" in capsys.readouterr().err

    def test_unknown_command(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(["factor", "z"])
