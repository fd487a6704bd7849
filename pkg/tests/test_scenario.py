import json

import pytest

from cli import Scenario, echo_scenario, load_scenario, parse_scenario
from cli.scenario import ECHO_NAME, read_scenario_file
from config.settings import get_config
from errors import CheckpointError, ConfigurationError, ValidationError
from polynomial import manakov

MINIMAL = {"polynomial": {"preset": "manakov", "n": 2}, "initial_data": {"kind": "soliton", "omega": 1}}


def _with(**sections):
    data = json.loads(json.dumps(MINIMAL))
    data.update(sections)
    return data


def _pointer(data, base):
    with pytest.raises(ValidationError) as info:
        parse_scenario(data, base)
    return info.value.pointer


def test_minimal_scenario_defaults(tmp_path):
    scenario = parse_scenario(MINIMAL, tmp_path)
    assert isinstance(scenario, Scenario)
    assert scenario.n_components() == 2
    assert (scenario.grid.n, scenario.grid.L) == (128, 32.0)
    assert scenario.evolution.dt == 1e-3
    assert scenario.evolution.guard_grad_factor == 10.0
    assert scenario.diagnostics.R == 8.0
    assert scenario.initial_data.params["w"] == "optimize"
    assert scenario.initial_data.params["refine"] is True
    assert scenario.outputs.dir == str(tmp_path.resolve())
    assert scenario.polynomial.build() == manakov(2)


def test_defaults_follow_lab_config(tmp_path):
    scenario = parse_scenario(MINIMAL, tmp_path, defaults=get_config(grid_n=32, box_length=20.0, dt=5e-4))
    assert (scenario.grid.n, scenario.grid.L) == (32, 20.0)
    assert scenario.evolution.dt == 5e-4
    assert scenario.diagnostics.R == 5.0


def test_unknown_key(tmp_path):
    assert _pointer(_with(grid={"m": 32}), tmp_path) == "/grid/m"
    assert _pointer(_with(extra=1), tmp_path) == "/extra"


def test_missing_sections(tmp_path):
    assert _pointer({"polynomial": {"preset": "manakov"}}, tmp_path) == "/initial_data"
    assert _pointer({"initial_data": {"kind": "soliton"}}, tmp_path) == "/polynomial"


def test_bad_values(tmp_path):
    assert _pointer(_with(grid={"n": 48}), tmp_path) == "/grid/n"
    assert _pointer(_with(grid={"L": -1}), tmp_path) == "/grid/L"
    assert _pointer(_with(diagnostics={"R": 10}), tmp_path) == "/diagnostics/R"
    assert _pointer(_with(initial_data={"kind": "wave"}), tmp_path) == "/initial_data/kind"
    assert _pointer(_with(initial_data={"kind": "ground_state", "w": [1, 0, 0]}), tmp_path) == "/initial_data/w"
    assert _pointer(_with(initial_data={"kind": "ground_state", "w": [1, 1]}), tmp_path) == "/initial_data/w"
    assert _pointer(_with(initial_data={"kind": "ground_state", "omega": 0}), tmp_path) == "/initial_data/omega"
    assert _pointer(_with(seed=1.5), tmp_path) == "/seed"


def test_evolution_errors_carry_pointers(tmp_path):
    with pytest.raises(ConfigurationError) as info:
        parse_scenario(_with(evolution={"dt": 0}), tmp_path)
    assert info.value.pointer == "/evolution/dt"


def test_polynomial_errors_are_rebased(tmp_path):
    assert _pointer(_with(polynomial={"preset": "spinor", "n": 2}), tmp_path) == "/polynomial/n"
    table = {"n": 2, "terms": [{"alpha": [1, 1], "beta": [2, 0], "coeff": 1.0},
                               {"alpha": [2, 0], "beta": [1, 1], "coeff": 2.0}]}
    assert _pointer(_with(polynomial=table), tmp_path) == "/polynomial"
    assert _pointer(_with(polynomial={"file": "missing.json"}), tmp_path) == "/polynomial/file"


def test_polynomial_file_is_relative_to_scenario(tmp_path):
    (tmp_path / "g.json").write_text(json.dumps(manakov(2).to_json()))
    scenario = parse_scenario(_with(polynomial={"file": "g.json"}), tmp_path)
    assert scenario.polynomial.build() == manakov(2)


def test_scaled_and_gaussian_kinds(tmp_path):
    gaussian = {"kind": "gaussian", "amplitude": [1, [0, 0.5]], "width": 2.0}
    scenario = parse_scenario(_with(initial_data={"kind": "scaled", "lambda": 0.5, "inner": gaussian}), tmp_path)
    inner = scenario.initial_data.inner
    assert inner.kind == "gaussian"
    assert inner.params["amplitude"] == [[1.0, 0.0], [0.0, 0.5]]
    assert _pointer(_with(initial_data={"kind": "scaled", "lambda": 2}), tmp_path) == "/initial_data/inner"
    bad = {"kind": "scaled", "lambda": 2, "inner": {"kind": "gaussian", "amplitude": [1]}}
    assert _pointer(_with(initial_data=bad), tmp_path) == "/initial_data/inner/amplitude"


def test_echo_reproduces_scenario(tmp_path):
    data = _with(outputs={"dir": "out"}, evolution={"dt": 0.01, "t_end": 0.5, "checkpoint_every": 5}, seed=3)
    scenario = parse_scenario(data, tmp_path)
    path = echo_scenario(scenario)
    assert path.resolve() == (tmp_path / "out" / ECHO_NAME).resolve()
    assert parse_scenario(read_scenario_file(path), path.parent) == scenario
    assert scenario.outputs.checkpoints == (tmp_path / "out" / "checkpoints").resolve()


def test_load_scenario(tmp_path):
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(_with(outputs={"dir": "results"})))
    scenario = load_scenario(path)
    assert (tmp_path / "results" / ECHO_NAME).exists()
    assert scenario.outputs.csv_path == (tmp_path / "results" / "diagnostics.csv").resolve()


def test_unreadable_scenarios(tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text("{")
    with pytest.raises(ValidationError):
        load_scenario(broken)
    with pytest.raises(CheckpointError):
        load_scenario(tmp_path / "absent.json")
