import io
import json

import numpy as np
import pytest
from rich.console import Console

from reach_geo.domain.errors import NonConvergenceError
from reach_geo.domain.geometry import curve_length, is_unimodal
from reach_geo.domain.models import Trajectory
from reach_geo.infrastructure.models.engel1d import Engel1DModel
from reach_geo.infrastructure.scenarios.exporters import read_csv
from reach_geo.infrastructure.strategies import fiber_scan
from reach_geo.presentation.cli import EXIT_INPUT, EXIT_OK, EXIT_SOLVER, ReachGeoCLI


@pytest.fixture
def output():
    return io.StringIO()


@pytest.fixture
def cli(output):
    return ReachGeoCLI(console=Console(file=output, width=120))


def test_list_scenarios(cli, output):
    assert cli.run(["list-scenarios"]) == EXIT_OK
    assert "set-to-set" in output.getvalue()


def test_validate_bundled(cli, output):
    assert cli.run(["validate", "point-to-set"]) == EXIT_OK
    assert "nenhum problema" in output.getvalue()


def test_validate_reports_issues(cli, output, tmp_path):
    path = tmp_path / "short.scn"
    path.write_text("name = short\nmodel = 1d\n[initial]\nt = 0\nx = 0\nv = 0\na = 0\n[final]\nt = 1\n",
                    encoding="utf-8")
    assert cli.run(["validate", str(path)]) == EXIT_OK
    assert "non-square" in output.getvalue()


def test_validate_strict_fails_on_issues(cli, output, tmp_path):
    path = tmp_path / "short.scn"
    path.write_text("name = short\nmodel = 1d\n[initial]\nt = 0\nx = 0\nv = 0\na = 0\n[final]\nt = 1\n",
                    encoding="utf-8")
    assert cli.run(["validate", str(path), "--strict"]) == EXIT_INPUT
    assert cli.run(["validate", "centerout-1d", "--strict"]) == EXIT_OK


def test_run_rejects_unparsable_file(cli, tmp_path):
    path = tmp_path / "broken.scn"
    path.write_text("name = broken\nmodel = 1d\n[initial\n", encoding="utf-8")
    assert cli.run(["run", str(path), "--out", str(tmp_path / "out")]) == EXIT_INPUT
    assert not (tmp_path / "out").exists()


def test_run_rejects_non_square_problem(cli, tmp_path):
    path = tmp_path / "short.scn"
    path.write_text("name = short\nmodel = 1d\n[initial]\nt = 0\nx = 0\nv = 0\na = 0\n[final]\nt = 1\nx = 1\n",
                    encoding="utf-8")
    assert cli.run(["run", str(path), "--out", str(tmp_path)]) == EXIT_INPUT


def test_run_unknown_scenario(cli, tmp_path):
    assert cli.run(["run", "no-such-scenario", "--out", str(tmp_path)]) == EXIT_INPUT


def test_run_center_out_writes_results(cli, tmp_path):
    out = tmp_path / "out"
    assert cli.run(["run", "centerout-1d", "--out", str(out)]) == EXIT_OK

    csv_path = out / "centerout-1d.csv"
    summary_path = out / "centerout-1d.summary.json"
    assert (out / "centerout-1d.plot.txt").exists()

    header, table = read_csv(csv_path)
    assert header[:5] == ["s", "t", "x", "v", "a"]
    assert len(table) == 101
    assert is_unimodal(table[:, header.index("v")])

    traj = Trajectory(model="1d", parameter=table[:, 0], states=table[:, 1:5], covectors=table[:, 5:9])
    summary = json.loads(summary_path.read_text(encoding="utf-8"))
    recomputed = curve_length(traj, Engel1DModel().controls(traj))
    assert summary["length"] == pytest.approx(recomputed, abs=1e-10)
    assert summary["energy_length_gap"] <= 1e-6
    assert summary["argmin_index"] == []
    assert summary["candidates"][0]["argmin"] is True

    first = csv_path.read_bytes()
    assert cli.run(["run", "centerout-1d", "--out", str(out)]) == EXIT_OK
    assert csv_path.read_bytes() == first


def test_run_overrides_samples(cli, tmp_path):
    assert cli.run(["run", "centerout-1d", "--out", str(tmp_path), "--samples", "11"]) == EXIT_OK
    _, table = read_csv(tmp_path / "centerout-1d.csv")
    assert len(table) == 11


def test_solver_failure_writes_diagnostics(cli, tmp_path, monkeypatch):
    def failing(spec, opts=None, model=None):
        raise NonConvergenceError("shooting não convergiu")

    monkeypatch.setattr(fiber_scan, "solve", failing)
    assert cli.run(["run", "centerout-1d", "--out", str(tmp_path)]) == EXIT_SOLVER

    payload = json.loads((tmp_path / "centerout-1d.diagnostics.json").read_text(encoding="utf-8"))
    assert payload["error"] == "NoGeodesicFoundError"
    assert payload["points"][0]["error"] == "shooting não convergiu"
    assert not (tmp_path / "centerout-1d.csv").exists()


def test_run_accepts_scenario_alias(cli, tmp_path):
    assert cli.run(["run", "fig2-1d-centerout", "--out", str(tmp_path)]) == EXIT_OK
    assert (tmp_path / "centerout-1d.csv").exists()
