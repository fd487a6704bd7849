import json

import numpy as np
import pytest

from cli import load_scenario
from cli.commands import main, parse_lambdas
from cli.scenario import ECHO_NAME
from config.settings import get_config
from diagnostics import read_diagnostics
from errors import ConfigurationError, UsageError
from polynomial import manakov
from solver.checkpoint import checkpoint_name
from solver.simulation import RunStatus

GAUSSIAN_RUN = {
    "polynomial": {"preset": "manakov", "n": 1},
    "initial_data": {"kind": "gaussian", "amplitude": [0.5], "width": 1.5},
    "grid": {"n": 32, "L": 16},
    "evolution": {"dt": 0.01, "t_end": 0.2, "snapshot_every": 2, "checkpoint_every": 10},
    "diagnostics": {"R": 4},
    "outputs": {"dir": "out"},
}

GROUND_STATE_SWEEP = {
    "polynomial": {"preset": "manakov", "n": 1},
    "initial_data": {"kind": "ground_state", "omega": 1},
    "grid": {"n": 128, "L": 32},
    "outputs": {"dir": "sweep"},
}


def _write(tmp_path, data, name="scenario.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return path


# ---------------------------------------------------------------------- #
# runs and resume


def test_run_and_resume(lab, tmp_path):
    scenario = load_scenario(_write(tmp_path, GAUSSIAN_RUN))
    run = lab.run_scenario(scenario)
    out = tmp_path / "out"

    assert run.status is RunStatus.COMPLETED
    assert run.verdict == "ScatterRegion"
    summary = json.loads((out / "summary.json").read_text())
    assert summary["status"] == "Completed"
    assert summary["t_final"] == pytest.approx(0.2)
    assert summary["classification"]["condition2"] is True
    assert summary["drifts"]["M"] < 1e-10
    assert summary["virial"]["bound_holds"] is True
    assert read_diagnostics(out / "diagnostics.csv")["t"].size == 11

    checkpoints = out / "checkpoints"
    assert (checkpoints / ECHO_NAME).exists()
    first = checkpoints / checkpoint_name(10)
    assert first.exists() and (checkpoints / checkpoint_name(20)).exists()

    resumed = lab.resume(first)
    assert resumed.summary["t_start"] == pytest.approx(0.1)
    assert np.array_equal(resumed.result.final.data, run.result.final.data)
    assert read_diagnostics(out / "diagnostics_resumed.csv")["t"].size == 6
    assert (out / "summary_resumed.json").exists()


def test_run_from_checkpoint_kind(lab, tmp_path):
    lab.run_scenario(load_scenario(_write(tmp_path, GAUSSIAN_RUN)))
    follow = dict(GAUSSIAN_RUN, initial_data={"kind": "from_checkpoint",
                                              "path": f"out/checkpoints/{checkpoint_name(20)}"},
                  evolution={"dt": 0.01, "t_end": 0.3}, outputs={"dir": "next"})
    run = lab.run_scenario(load_scenario(_write(tmp_path, follow, "follow.json")))
    assert run.summary["t_start"] == pytest.approx(0.2)
    assert run.summary["t_final"] == pytest.approx(0.3)


def test_boost_check_in_summary(lab, tmp_path):
    data = dict(GAUSSIAN_RUN, diagnostics={"R": 4, "boost_check": True, "xi0": [2 * np.pi / 16, 0, 0]},
                evolution={"dt": 0.01, "t_end": 0.1})
    run = lab.run_scenario(load_scenario(_write(tmp_path, data)))
    assert run.summary["boost_check"]["passed"] is True


def test_zero_field_has_no_verdict(lab, tmp_path):
    data = dict(GAUSSIAN_RUN, initial_data={"kind": "gaussian", "amplitude": [0]},
                evolution={"dt": 0.01, "t_end": 0.05})
    run = lab.run_scenario(load_scenario(_write(tmp_path, data)))
    assert run.verdict is None
    assert run.status is RunStatus.COMPLETED


def test_identity_report(lab):
    report = lab.identity_report(manakov(3), trials=100)
    assert report["passed"]
    assert len(report["checks"]) == 4


# ---------------------------------------------------------------------- #
# sweeps


def test_ground_state_sweep(lab, tmp_path):
    scenario = load_scenario(_write(tmp_path, GROUND_STATE_SWEEP))
    sweep = lab.sweep_dichotomy(scenario, [0.9, 1.0, 1.1])
    assert [r.verdict for r in sweep.rows] == ["ScatterRegion", "Boundary", "AboveThreshold"]
    assert [r.scale for r in sweep.rows] == [0.9, 1.0, 1.1]
    assert sweep.bracket == {"lower": 0.9, "upper": 1.0, "from": "ScatterRegion", "to": "Boundary"}
    assert len(sweep.transitions) == 2

    paths = lab.write_sweep(sweep, tmp_path / "sweep")
    assert paths["csv"].read_text().splitlines()[0] == "lambda,mass_energy,K,verdict,status,error"
    assert json.loads(paths["json"].read_text())["rows"][2]["verdict"] == "AboveThreshold"


GAUSSIAN_FAMILY = {
    "polynomial": {"preset": "manakov", "n": 1},
    "initial_data": {"kind": "gaussian", "amplitude": [1.0], "width": 1.5},
    "grid": {"n": 32, "L": 16},
    "outputs": {"dir": "family"},
}


def test_gaussian_sweep_crosses_bands_once(lab, tmp_path):
    scenario = load_scenario(_write(tmp_path, GAUSSIAN_FAMILY))
    lambdas = [round(0.25 + 0.05 * i, 2) for i in range(56)]
    sweep = lab.sweep_dichotomy(scenario, lambdas)
    verdicts = [r.verdict for r in sweep.rows]
    assert not any(r.failed for r in sweep.rows)

    # M E grows like lambda^4 and then falls like -lambda^6, so each band is one interval
    bands = [v for i, v in enumerate(verdicts) if i == 0 or v != verdicts[i - 1]]
    assert bands == ["ScatterRegion", "AboveThreshold", "BlowupRegion"]
    assert [(t["from"], t["to"]) for t in sweep.transitions] == [
        ("ScatterRegion", "AboveThreshold"), ("AboveThreshold", "BlowupRegion"),
    ]
    assert 1.2 < sweep.bracket["upper"] < 1.4


def test_sweep_records_failed_rows(lab, tmp_path):
    scenario = load_scenario(_write(tmp_path, GAUSSIAN_RUN))
    sweep = lab.sweep_dichotomy(scenario, [0.0, 0.5])
    assert sweep.rows[0].failed
    assert sweep.rows[1].verdict == "ScatterRegion"
    assert sweep.bracket is None


@pytest.mark.parametrize("lambdas", [[1.0], [1.0, 0.5], [1.0, 1.0]])
def test_sweep_rejects_bad_lambdas(lab, tmp_path, lambdas):
    scenario = load_scenario(_write(tmp_path, GAUSSIAN_RUN))
    with pytest.raises(UsageError):
        lab.sweep_dichotomy(scenario, lambdas)


# ---------------------------------------------------------------------- #
# command line


def test_parse_lambdas():
    assert parse_lambdas("0.5:1.5:0.25") == [0.5, 0.75, 1.0, 1.25, 1.5]
    assert parse_lambdas("1,2.5") == [1.0, 2.5]
    with pytest.raises(UsageError):
        parse_lambdas("1:2:0")
    with pytest.raises(UsageError):
        parse_lambdas("a:b")


def test_cli_usage_errors():
    assert main([]) == 1
    assert main(["bogus"]) == 1
    assert main(["run"]) == 1


def test_cli_run_and_resume(tmp_path):
    assert main(["run", str(_write(tmp_path, GAUSSIAN_RUN))]) == 0
    checkpoint = tmp_path / "out" / "checkpoints" / checkpoint_name(10)
    assert main(["resume", str(checkpoint)]) == 0
    assert main(["resume", str(tmp_path / "missing.gnls")]) == 4


def test_cli_exit_codes(tmp_path):
    assert main(["run", str(tmp_path / "absent.json")]) == 4
    broken = tmp_path / "broken.json"
    broken.write_text("{")
    assert main(["run", str(broken)]) == 2
    assert main(["run", str(_write(tmp_path, dict(GAUSSIAN_RUN, grid={"n": 48})))]) == 2
    assert main(["sweep", str(_write(tmp_path, GAUSSIAN_RUN)), "--lambda", "1"]) == 1

    negative = tmp_path / "negative.json"
    negative.write_text(json.dumps(manakov(2).scaled(-1.0).to_json()))
    assert main(["groundstate", "--poly-file", str(negative), "--restarts", "5"]) == 3


def test_cli_check_identities(tmp_path):
    out = tmp_path / "ids.json"
    code = main(["check-identities", "--preset", "spinor", "--param", "b=0.5", "--trials", "200",
                 "--out", str(out)])
    assert code == 0
    assert json.loads(out.read_text())["passed"] is True
    assert main(["check-identities", "--param", "oops"]) == 1


def test_cli_groundstate(tmp_path, profile):
    out = tmp_path / "gs.json"
    code = main(["groundstate", "--preset", "manakov", "--param", "n=2", "--restarts", "10",
                 "--grid", "128", "--box", "32", "--out", str(out)])
    assert code == 0
    report = json.loads(out.read_text())
    assert report["g_max"] == pytest.approx(1.0, abs=1e-8)
    assert report["q0"] == pytest.approx(profile.q0)
    assert report["thresholds"]["me_threshold"] == pytest.approx(profile.mass_integral ** 2 / 4, rel=1e-6)


def test_cli_groundstate_rejects_coarse_grid(tmp_path):
    # 64 points on L = 32 leave two samples across the core of Q
    code = main(["groundstate", "--preset", "manakov", "--param", "n=1", "--restarts", "5",
                 "--grid", "64", "--box", "32", "--out", str(tmp_path / "gs.json")])
    assert code == 3
    assert not (tmp_path / "gs.json").exists()


def test_cli_sweep(tmp_path):
    assert main(["sweep", str(_write(tmp_path, GAUSSIAN_RUN)), "--lambda", "0.5:1.5:0.5"]) == 0
    assert (tmp_path / "out" / "sweep.csv").exists()


# ---------------------------------------------------------------------- #
# configuration


def test_config_overrides_and_validation():
    assert get_config(restarts=7).restarts == 7
    with pytest.raises(ConfigurationError):
        get_config(grid_n=48)
    with pytest.raises(ConfigurationError):
        get_config(wrap_fraction=1.0)
    with pytest.raises(ConfigurationError):
        get_config(ground_state_spacing=0.0)


def test_config_reads_thread_cap(monkeypatch):
    monkeypatch.setenv("GNLS_THREADS", "3")
    assert get_config().workers == 3
    monkeypatch.setenv("GNLS_THREADS", "many")
    with pytest.raises(ConfigurationError):
        get_config()
