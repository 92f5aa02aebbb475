import json

import pytest

from app.commands import BaseCommand
from app.errors import NonConvergenceError
from app.main import main
from app.models import Command, RunConfig
from app.runner import EXIT_NONCONVERGED, CommandRunner


def invoke(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def report_of(out: str):
    report = json.loads(out)
    assert report["schema"] == 1
    return report


def test_sine_keeps_the_exact_fraction(capsys):
    code, out = invoke(capsys, "sine", "--norm", "lp:inf", "--x", "1", "0", "--y", "1", "1")
    assert code == 0
    report = report_of(out)
    assert report["status"] == "ok"
    assert report["result"]["value"] == {"value": 0.5, "exact": "1/2"}
    assert report["result"]["exact"] is True
    assert report["config"]["norm"]["label"] == "lp:inf"


def test_asymmetric_ball_is_rejected_with_exit_2(capsys, unit_balls):
    code, out = invoke(capsys, "norm-info", "--norm", f"polygon:{unit_balls / 'bad_asymmetric.json'}")
    assert code == 2
    report = report_of(out)
    assert report["status"] == "invalid"
    assert report["result"]["error_type"] == "NormValidationError"
    assert "antipodal" in report["result"]["error"]


def test_bad_arguments_exit_2(capsys):
    assert invoke(capsys, "cb", "--norm", "lp:2", "--resolution", "4")[0] == 2
    assert invoke(capsys, "cb", "--norm", "lp:2", "--tol", "tol_orth")[0] == 2
    code, out = invoke(capsys, "cb")
    assert code == 2
    assert "needs --norm" in report_of(out)["result"]["error"]
    assert invoke(capsys, "figure", "--norm", "lp:2")[0] == 2


def test_euclidean_cb(capsys):
    code, out = invoke(capsys, "cb", "--norm", "lp:2", "--resolution", "16", "--inner-resolution", "4", "--deterministic")
    assert code == 0
    result = report_of(out)["result"]
    assert result["value"] == pytest.approx(1.0, abs=1e-6)
    assert result["bounds_ok"] is True


def test_bisector_csv(capsys):
    code, out = invoke(
        capsys, "bisector", "--norm", "lp:inf", "--x", "-1", "0", "--y", "1", "0",
        "--offset-max", "3", "--n-steps", "7", "--format", "csv",
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "offset,u,v,u_hi,v_hi"
    assert len(lines) == 8


def test_deterministic_runs_are_identical(capsys, tmp_path, unit_balls):
    svg = tmp_path / "cs.svg"
    argv = ["cs", "--norm", f"polygon:{unit_balls / 'hexagon.json'}", "--resolution", "32", "--deterministic", "--svg", str(svg)]
    code, first = invoke(capsys, *argv)
    first_svg = svg.read_bytes()
    assert code == 0
    _, second = invoke(capsys, *argv)
    assert first == second
    assert svg.read_bytes() == first_svg
    assert report_of(first)["result"]["value"] == pytest.approx(1.5, abs=1e-2)


def test_missing_svg_directory_exits_2(capsys, tmp_path):
    code, out = invoke(capsys, "figure", "--norm", "lp:inf", "--svg", str(tmp_path / "nope" / "c.svg"))
    assert code == 2
    assert report_of(out)["result"]["error_type"] == "OutputError"


def test_non_convergence_exits_3():
    class Stuck(BaseCommand):
        def execute(self, context):
            raise NonConvergenceError("bracket expansion exceeded 60 doublings")

    runner = CommandRunner()
    runner.register_command(Command.SINE, Stuck)
    outcome = runner.execute(RunConfig(command="sine", norm_source="euclidean"))
    assert outcome.exit_code == EXIT_NONCONVERGED
    assert outcome.report["status"] == "nonconverged"
    assert outcome.table is None


def test_ledger_records_runs(capsys, tmp_path):
    url = f"sqlite:///{tmp_path / 'ledger.db'}"
    invoke(capsys, "cb", "--norm", "lp:2", "--resolution", "16", "--inner-resolution", "4", "--deterministic", "--ledger", url)
    code, out = invoke(capsys, "runs", "--ledger", url)
    assert code == 0
    runs = report_of(out)["result"]["runs"]
    assert [r["command"] for r in runs] == ["runs", "cb"]
    cb = runs[1]
    assert cb["status"] == "succeeded"
    assert cb["norm_label"] == "lp:2"
    assert cb["value"] == pytest.approx(1.0, abs=1e-6)


def test_ortho_reports_every_predicate(capsys):
    code, out = invoke(capsys, "ortho", "--norm", "lp:inf", "--x", "1", "1", "--y", "0", "1")
    assert code == 0
    result = report_of(out)["result"]
    assert result["sine"] == 1
    assert result["birkhoff"] is True
    assert result["roberts"] is False
    assert result["reflection"]["sup"] == pytest.approx(3.0)
    assert result["reflection"]["matrix"] == [[1.0, 0.0], [2.0, -1.0]]


def test_norm_info_of_the_hexagon(capsys, unit_balls):
    code, out = invoke(capsys, "norm-info", "--norm", str(unit_balls / "hexagon.json"))
    assert code == 0
    result = report_of(out)["result"]
    assert result["strictly_convex"] is False
    assert result["vertex_count"] == 6
    assert len(result["flat_spots"]) == 6
    assert result["exactness"] == "polygon-exact-combinatorics"


def test_inner_command_on_the_square(capsys):
    code, out = invoke(capsys, "inner", "--norm", "lp:inf", "--x", "1", "0", "--n-steps", "8")
    assert code == 0
    result = report_of(out)["result"]
    assert result["needs_review"] is False
    assert result["projection"]["degenerate"] is True


def test_ipq_and_dconst(capsys):
    code, out = invoke(capsys, "ipq", "--norm", "euclidean", "--resolution", "32")
    assert code == 0
    assert report_of(out)["result"]["is_inner_product"] is True
    code, out = invoke(capsys, "dconst", "--norm", "euclidean", "--resolution", "16", "--deterministic")
    assert code == 0
    assert report_of(out)["result"]["value"] == pytest.approx(1.0, abs=1e-6)


def test_search_records_improvements(capsys, tmp_path):
    url = f"sqlite:///{tmp_path / 'search.db'}"
    code, out = invoke(
        capsys, "search", "--count", "2", "--search-resolution", "16", "--search-inner-resolution", "8",
        "--deterministic", "--ledger", url,
    )
    assert code == 0
    result = report_of(out)["result"]
    assert result["conclusive"] is False
    assert len(result["records"]) == 2
    _, out = invoke(capsys, "runs", "--ledger", url)
    commands = [r["command"] for r in report_of(out)["result"]["runs"]]
    assert "search-improvement" in commands


def test_reflected_circle_figure(capsys, tmp_path):
    svg = tmp_path / "t.svg"
    code, _ = invoke(capsys, "figure", "--norm", "lp:inf", "--figure", "reflected-circle", "--theta", "0.3", "--svg", str(svg))
    assert code == 0
    assert 'stroke-dasharray="0.04 0.04"' in svg.read_text()
