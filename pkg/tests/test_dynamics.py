import json

import numpy as np
import pytest

from cli import load_scenario
from diagnostics import (
    BoostParams,
    DiagnosticsCollector,
    VirialWeight,
    boost,
    boost_covariance_check,
)
from polynomial import manakov
from solver import EvolutionConfig, FieldState, GridDescriptor
from solver.simulation import RunStatus, simulate
from variational import GroundStateSpec, build_ground_state, functionals, refine_ground_state

pytestmark = pytest.mark.slow

# n = 128, L = 128 at omega = 1/16 is the scaled image of n = 128, L = 32 at omega = 1,
# with the clock running 16 times slower
SLOW_OMEGA = 1.0 / 16.0
W = np.array([1.0, 1.0j]) / np.sqrt(2.0)


def _relative(a, b):
    return np.linalg.norm(a.data - b.data) / np.linalg.norm(b.data)


@pytest.fixture(scope="module")
def soliton(profile):
    spec = GroundStateSpec(omega=SLOW_OMEGA, g_max=1.0, w=W)
    grid = GridDescriptor(128, 128.0, 2)
    return refine_ground_state(build_ground_state(spec, profile, grid), spec)


@pytest.fixture(scope="module")
def soliton_run(soliton):
    g = manakov(2)
    collector = DiagnosticsCollector(g, VirialWeight(soliton.grid, 16.0))
    result = simulate(soliton, g, EvolutionConfig(dt=1e-3, t_end=1.0, snapshot_every=50), sinks=[collector])
    return result, collector


@pytest.fixture(scope="module")
def tight_soliton(profile):
    """omega = 1 soliton refined on the torus L = 4 pi, where xi = 1/2 is a lattice frequency"""
    spec = GroundStateSpec(omega=1.0, g_max=1.0, w=W)
    grid = GridDescriptor(128, 4.0 * np.pi, 2)
    radial = spec.amplitude() * profile(grid.radius_from((0.0, 0.0, 0.0)))
    return refine_ground_state(FieldState(grid, W[:, None, None, None] * radial[None]), spec)


# ---------------------------------------------------------------------- #
# stationary soliton


def test_soliton_only_rotates_its_phase(soliton, soliton_run):
    result, _ = soliton_run
    assert result.status is RunStatus.COMPLETED
    assert result.final.t == pytest.approx(1.0)
    exact = soliton.scaled(np.exp(1j * SLOW_OMEGA * result.final.t))
    assert _relative(result.final, exact) <= 1e-5

    drifts = result.drifts()
    assert drifts["M"] <= 1e-10
    assert drifts["E"] <= 1e-6
    assert drifts["P"] <= 1e-10


def test_soliton_l4_norm_is_constant(soliton_run):
    _, collector = soliton_run
    l4 = np.array([row["L4"] for row in collector.rows])
    assert l4.size == 21
    assert np.max(np.abs(l4 - l4[0])) <= 1e-5 * l4[0]


def test_soliton_virial_is_flat(soliton_run):
    result, collector = soliton_run
    series = collector.virial_series()
    H = result.records[0].H
    assert np.max(np.abs(series.Vpp)) <= 1e-3 * 8.0 * H
    assert np.max(np.abs(series.K8)) <= 1e-2 * 8.0 * H
    np.testing.assert_allclose(series.V, series.V[0], rtol=1e-5)


# ---------------------------------------------------------------------- #
# moving soliton


def test_soliton_boost_covariance(tight_soliton, pair):
    report = boost_covariance_check(tight_soliton, pair, BoostParams((0.5, 0.0, 0.0)), t_end=0.1,
                                    cfg=EvolutionConfig(dt=2e-3))
    assert report.t_end == pytest.approx(0.1)
    assert report.discrepancy <= 1e-5
    assert report.passed


def test_boosted_soliton_centroid_moves_at_twice_xi(tight_soliton, pair):
    xi = np.array([0.5, 0.0, 0.0])
    moving = boost(tight_soliton, BoostParams(tuple(xi)))
    record = functionals(moving, pair)
    np.testing.assert_allclose(record.P, 2.0 * record.M * xi, rtol=1e-8, atol=1e-10)

    collector = DiagnosticsCollector(pair, VirialWeight(moving.grid, 1.5))
    simulate(moving, pair, EvolutionConfig(dt=2e-3, t_end=0.2, snapshot_every=20), sinks=[collector])
    times = np.array([row["t"] for row in collector.rows])
    np.testing.assert_allclose(collector.centroids(), np.outer(times, 2.0 * xi), atol=1e-6)


# ---------------------------------------------------------------------- #
# scattering side of the dichotomy

WEAK_GAUSSIAN = {
    "polynomial": {"preset": "manakov", "n": 1},
    "initial_data": {"kind": "gaussian", "amplitude": [0.5], "width": 1.0},
    "grid": {"n": 64, "L": 32},
    "evolution": {"dt": 0.01, "t_end": 3.0, "snapshot_every": 10},
    "outputs": {"dir": "weak"},
}


def test_scatter_region_run_disperses(lab, tmp_path):
    path = tmp_path / "weak.json"
    path.write_text(json.dumps(WEAK_GAUSSIAN))
    run = lab.run_scenario(load_scenario(path))
    assert run.verdict == "ScatterRegion"
    assert run.status is RunStatus.COMPLETED

    fit = run.summary["decay_fit"]
    assert fit["t_wrap"] > 3.0
    assert fit["tail_monotone_decreasing"] is True
    assert fit["decay_exponent"] < -0.3
