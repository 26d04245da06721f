import json
import logging

import numpy as np
import pytest

from reach_geo.domain.errors import NoGeodesicFoundError, NonConvergenceError, ScenarioParseError
from reach_geo.domain.models import Fixed, Free, Interval, IterationRecord, Trajectory
from reach_geo.infrastructure import config
from reach_geo.infrastructure.models.engel1d import Engel1DModel
from reach_geo.infrastructure.models.kin2d import Kinematic2DModel
from reach_geo.infrastructure.scenarios.exporters import (
    plot_script,
    read_csv,
    trajectory_table,
    write_csv,
    write_diagnostics,
)
from reach_geo.infrastructure.scenarios.parser import (
    SCENARIO_ALIASES,
    apply_overrides,
    bundled_scenarios,
    describe_bundled,
    evaluate,
    load_scenario,
    parse_condition,
    parse_text,
    resolve_path,
    validate_file,
)

CENTER_OUT = """
# comentário
name = teste
model = 1d
description = alcance curto

[initial]
t = 0
x = 0
v = 0
a = 0

[final]
t = 1
x = 0.5   # meio caminho
v = 0
a = 0

[solver]
tol = 1e-9
grid = 4
fixed_step = 1/200

[output]
samples = 51
"""


def test_all_bundled_scenarios_are_valid():
    bundled = bundled_scenarios()
    assert len(bundled) == 10
    for name in bundled:
        assert validate_file(name) == [], name


def test_aliases_resolve_to_bundled_scenarios():
    bundled = bundled_scenarios()
    for alias, name in SCENARIO_ALIASES.items():
        assert resolve_path(alias) == bundled[name]
        assert load_scenario(alias).name == name
    with pytest.raises(ScenarioParseError):
        resolve_path("fig9-unknown")


def test_describe_bundled():
    rows = describe_bundled()
    names = [name for name, _, _ in rows]
    assert "centerout-1d" in names
    assert dict((name, model) for name, model, _ in rows)["straight-heading-2d"] == "2d-theta-frozen"


def test_parse_text():
    scenario = parse_text(CENTER_OUT)
    assert scenario.name == "teste"
    assert scenario.description == "alcance curto"
    assert scenario.grid == 4
    assert scenario.solver.tol == 1e-9
    assert scenario.solver.samples == 51
    assert scenario.solver.step_control.mode == "fixed"
    assert scenario.solver.step_control.step == pytest.approx(0.005)
    assert scenario.boundary.final["x"] == Fixed(value=0.5)


@pytest.mark.parametrize("raw, expected", [
    ("pi/6", Fixed(value=np.pi / 6)),
    ("-3*pi/8", Fixed(value=-3 * np.pi / 8)),
    ("0.3*cos(7*pi/24)", Fixed(value=0.3 * np.cos(7 * np.pi / 24))),
    ("free", Free()),
    ("FREE", Free()),
    ("[0, pi/2]", Interval(lo=0.0, hi=np.pi / 2)),
    ("[-sqrt(2), cos(0)]", Interval(lo=-np.sqrt(2), hi=1.0)),
    ([0.1, "pi"], Interval(lo=0.1, hi=np.pi)),
    (2, Fixed(value=2.0)),
])
def test_parse_condition(raw, expected):
    assert parse_condition(raw) == expected


@pytest.mark.parametrize("expression", ["__import__('os')", "pi +", "1/0", "x", "exp(1000)", "sin(1, 2)"])
def test_evaluate_rejects_bad_expressions(expression):
    with pytest.raises(ScenarioParseError):
        evaluate(expression)


def test_reversed_interval_is_rejected():
    with pytest.raises(ScenarioParseError):
        parse_condition("[1, 0]")


@pytest.mark.parametrize("text, line", [
    ("name = a\nmodel = 1d\n[initial]\nt = oops\n", 4),
    ("name = a\nmodel = 1d\n[bogus]\n", 3),
    ("name = a\nmodel = 1d\n[initial]\nt = 0\nt = 1\n", 5),
    ("name = a\nmodel = 1d\ntol = 1\n", 3),
    ("name = a\nmodel = 1d\n[solver]\nwarp = 9\n", 4),
    ("name = a\nmodel = 3d\n", 2),
    ("name = a\nmodel = 1d\n[initial]\njust text\n", 4),
])
def test_errors_carry_line_numbers(text, line):
    with pytest.raises(ScenarioParseError) as excinfo:
        parse_text(text)
    assert excinfo.value.line == line
    assert str(excinfo.value).startswith(f"linha {line}:")


def test_missing_name_is_rejected():
    with pytest.raises(ScenarioParseError):
        parse_text("model = 1d\n")


def test_json_scenario():
    text = json.dumps({
        "name": "json",
        "model": "2d",
        "initial": {"t": 0, "x": 0, "y": 0, "theta": "pi/3", "v": 0, "a": "3*pi/8"},
        "final": {"t": 1, "x": 0.1, "y": 0.2, "theta": [0, "pi/2"], "v": 0, "a": "-3*pi/8"},
        "solver": {"grid": 3, "exhaustive": True},
    })
    scenario = parse_text(text)
    assert scenario.grid == 3
    assert scenario.solver.exhaustive
    assert scenario.boundary.final["theta"] == Interval(lo=0.0, hi=np.pi / 2)
    assert scenario.boundary.issues() == []


def test_invalid_json_reports_line():
    with pytest.raises(ScenarioParseError) as excinfo:
        parse_text('{\n"name": "x",\n"model": }')
    assert excinfo.value.line == 3


def test_validate_interval_on_position(tmp_path):
    path = tmp_path / "bad.scn"
    path.write_text(
        "name = bad\nmodel = 2d\n[initial]\nt = 0\nx = [0, 1]\ny = 0\ntheta = 0\nv = 0\na = 0\n"
        "[final]\nt = 1\nx = 1\ny = 0\ntheta = 0\nv = 0\na = 0\n",
        encoding="utf-8",
    )
    issues = validate_file(path)
    assert [i.code for i in issues] == ["interval-coordinate"]
    assert "intervals allowed only on theta/accel" in issues[0].message


def test_validate_non_square(tmp_path):
    path = tmp_path / "short.scn"
    path.write_text("name = short\nmodel = 1d\n[initial]\nt = 0\nx = 0\nv = 0\na = 0\n[final]\nt = 1\nx = 1\n",
                    encoding="utf-8")
    issues = validate_file(path)
    assert [i.code for i in issues] == ["non-square"]
    assert "-2" in issues[0].message


def test_validate_never_raises(tmp_path):
    assert validate_file(tmp_path / "missing.scn")[0].code == "parse-error"


def test_apply_overrides():
    scenario = load_scenario("initial-accel-fiber")
    updated = apply_overrides(scenario, tol=1e-6, grid=3, fixed_step=0.01, samples=21)
    assert updated.grid == 3
    assert updated.solver.tol == 1e-6
    assert updated.solver.step_control.mode == "fixed"
    assert updated.solver.samples == 21 and updated.output.samples == 21
    assert updated.boundary == scenario.boundary
    assert apply_overrides(scenario) == scenario


def test_trajectory_table_columns():
    n = 3
    traj = Trajectory(model="2d", parameter=np.linspace(0.0, 1.0, n), states=np.zeros((n, 6)),
                      covectors=np.tile([1.0, 0.0, 0.0, 0.0, 0.0, 0.0], (n, 1)))
    header, table = trajectory_table(traj, Kinematic2DModel())
    assert header == ["s", "t", "x", "y", "theta", "v", "a", "p_t", "p_x", "p_y", "p_theta", "p_v", "p_a", "H"]
    np.testing.assert_allclose(table[:, -1], 0.5)


def test_csv_round_trip(tmp_path):
    n = 4
    states = np.column_stack([np.linspace(0.0, 1.0, n), np.linspace(0.0, 1.0, n) ** 2, np.ones(n), np.zeros(n)])
    traj = Trajectory(model="1d", parameter=np.linspace(0.0, 1.0, n), states=states,
                      covectors=np.tile([0.6, 0.0, 0.0, 0.8], (n, 1)))
    path = write_csv(tmp_path / "traj.csv", traj, Engel1DModel())
    header, table = read_csv(path)
    assert header == ["s", "t", "x", "v", "a", "p_t", "p_x", "p_v", "p_a", "H"]
    np.testing.assert_array_equal(table[:, 2], states[:, 1])


def test_plot_script_panels():
    script = plot_script("demo", "demo.csv", "1d")
    assert "data demo.csv" in script
    assert "panel path x=t y=x" in script
    assert "panel speed x=t y=v" in script
    assert "hline accel y=0" in script
    assert "aspect=equal" in plot_script("demo", "demo.csv", "2d")


def test_write_diagnostics(tmp_path):
    error = NonConvergenceError("sem convergência", trace=[
        IterationRecord(start_index=0, iteration=1, residual_norm=0.5, step_scale=1.0, homotopy=0.25),
        IterationRecord(start_index=1, iteration=0, error="AdmissibilityError: h atingiu o piso")])
    payload = json.loads(write_diagnostics(tmp_path / "out", "demo", error).read_text(encoding="utf-8"))
    assert payload["error"] == "NonConvergenceError"
    assert payload["best_residual_norm"] is None
    assert payload["continuation_reach"] is None
    assert payload["trace"][0]["residual_norm"] == 0.5
    assert payload["trace"][0]["homotopy"] == 0.25
    assert payload["trace"][1]["residual_norm"] is None
    assert payload["trace"][1]["error"].startswith("AdmissibilityError")

    error = NoGeodesicFoundError("nada", diagnostics=[{"index": [0], "error": "falhou"}])
    payload = json.loads(write_diagnostics(tmp_path, "demo", error).read_text(encoding="utf-8"))
    assert payload["points"] == [{"index": [0], "error": "falhou"}]


@pytest.mark.parametrize("raw", ["abc", "-1", "0"])
def test_env_float_falls_back(monkeypatch, caplog, raw):
    monkeypatch.setenv("REACHGEO_TEST_VALUE", raw)
    caplog.set_level(logging.WARNING, logger="reach_geo")
    assert config._env_float("REACHGEO_TEST_VALUE", 0.25) == 0.25
    assert "REACHGEO_TEST_VALUE" in caplog.text


def test_env_int(monkeypatch):
    monkeypatch.setenv("REACHGEO_TEST_VALUE", "8")
    assert config._env_int("REACHGEO_TEST_VALUE", 4) == 8
    monkeypatch.setenv("REACHGEO_TEST_VALUE", "2.5")
    assert config._env_int("REACHGEO_TEST_VALUE", 4) == 4
    monkeypatch.delenv("REACHGEO_TEST_VALUE")
    assert config._env_int("REACHGEO_TEST_VALUE", 4) == 4
