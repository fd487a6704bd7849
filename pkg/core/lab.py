# core/lab.py
import csv
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from config.settings import LabConfig
from errors import (
    CheckpointError,
    GNLSError,
    NonfocusingError,
    UsageError,
    ValidationError,
)
from polynomial import GaugePolynomial, check_identities
from solver.checkpoint import read_checkpoint
from solver.grid import FieldState, GridDescriptor
from solver.simulation import RunResult, RunStatus, simulate
from diagnostics import (
    BoostParams,
    DiagnosticsCollector,
    VirialWeight,
    boost,
    boost_covariance_check,
    wrap_time,
)
from variational import (
    Classification,
    GroundStateSpec,
    RadialProfile,
    SphereMaximum,
    Thresholds,
    build_ground_state,
    classify,
    functionals,
    maximize_g_on_sphere,
    refine_ground_state,
    solve_scalar_Q,
    thresholds,
)
from cli.scenario import (
    ECHO_NAME,
    InitialDataSpec,
    Scenario,
    as_complex,
    echo_scenario,
    parse_scenario,
    read_scenario_file,
)

logger = logging.getLogger(__name__)


@lru_cache(maxsize=4)
def _scalar_profile(tol: float, r_max: float, dr: float, bracket: Tuple[float, float]) -> RadialProfile:
    return solve_scalar_Q(tol=tol, r_max=r_max, dr=dr, bracket=bracket)


def write_json(path: Path, payload: dict):
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            json.dump(payload, f, indent=2, default=_json_default)
            f.write("\n")
    except OSError as e:
        raise CheckpointError(f"Failed to write {path}: {e}") from e


def _json_default(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (np.floating, np.integer, np.bool_)):
        return value.item()
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"cannot serialize {type(value).__name__}")


@dataclass
class RunSummary:
    """Artifacts and headline numbers of one scenario run"""
    status: RunStatus
    verdict: Optional[str]
    summary: Dict[str, Any]
    result: RunResult
    collector: DiagnosticsCollector


@dataclass
class SweepRow:
    scale: float
    mass_energy: float = np.nan
    K: float = np.nan
    verdict: Optional[str] = None
    status: Optional[str] = None
    error: Optional[str] = None

    @property
    def failed(self) -> bool:
        return self.error is not None

    def as_dict(self) -> dict:
        return {"lambda": self.scale, "mass_energy": self.mass_energy, "K": self.K,
                "verdict": self.verdict, "status": self.status, "error": self.error}


@dataclass
class SweepResult:
    rows: List[SweepRow]
    thresholds: Thresholds
    transitions: List[dict] = field(default_factory=list)

    @property
    def bracket(self) -> Optional[dict]:
        """First interval of lambda on which the verdict changes"""
        return self.transitions[0] if self.transitions else None

    def as_dict(self) -> dict:
        return {
            "thresholds": self.thresholds.as_dict(),
            "rows": [r.as_dict() for r in self.rows],
            "bracket": self.bracket,
            "transitions": self.transitions,
        }


class GNLSLab:
    """Orchestrates variational precomputation, classification, evolution and diagnostics"""

    def __init__(self, config: Optional[LabConfig] = None):
        self.config = config or LabConfig()

    # ------------------------------------------------------------------ #
    # variational precomputation

    @property
    def profile(self) -> RadialProfile:
        c = self.config
        return _scalar_profile(c.shoot_tol, c.r_max, c.dr, tuple(c.q0_bracket))

    def sphere_maximum(self, g: GaugePolynomial, seed: int = 0) -> SphereMaximum:
        c = self.config
        return maximize_g_on_sphere(g, restarts=c.restarts, seed=seed, max_iter=c.max_iter,
                                    stationarity_tol=c.stationarity_tol, dedup_tol=c.dedup_tol)

    def thresholds(self, g: GaugePolynomial, seed: int = 0) -> Tuple[SphereMaximum, Thresholds]:
        sphere = self.sphere_maximum(g, seed)
        return sphere, thresholds(self.profile, sphere.g_max)

    def grid(self, n: int, box_length: float, n_components: int) -> GridDescriptor:
        return GridDescriptor(n, box_length, n_components, workers=self.config.workers)

    # ------------------------------------------------------------------ #
    # initial data

    def _ground_state_spec(self, params: dict, g: GaugePolynomial, seed: int) -> GroundStateSpec:
        sphere = self.sphere_maximum(g, seed)
        if params["w"] == "optimize":
            w = sphere.maximizers[0]
        else:
            w = as_complex(params["w"])
        spec = GroundStateSpec(omega=params["omega"], g_max=sphere.g_max, w=w, y=tuple(params["y"]))
        spec.validate_against(g)
        return spec

    def build_initial_data(self, spec: InitialDataSpec, g: GaugePolynomial, grid: GridDescriptor,
                           seed: int = 0) -> FieldState:
        """Realize an initial-data descriptor on the grid"""
        params = spec.params
        if spec.kind in ("ground_state", "soliton"):
            gs = self._ground_state_spec(params, g, seed)
            u = build_ground_state(gs, self.profile, grid, max_spacing=self.config.ground_state_spacing)
            if params["refine"]:
                u = refine_ground_state(u, gs)
            if spec.kind == "soliton" and any(params["xi"]):
                u = boost(u, BoostParams(tuple(params["xi"])))
            return u

        if spec.kind == "gaussian":
            amplitude = as_complex(params["amplitude"])
            r = grid.radius_from(params["center"])
            envelope = np.exp(-0.5 * (r / params["width"]) ** 2)
            x, y, z = grid.coordinates
            xi = params["phase"]
            carrier = np.exp(1j * (xi[0] * x + xi[1] * y + xi[2] * z))
            return FieldState(grid, amplitude[:, None, None, None] * (envelope * carrier)[None])

        if spec.kind == "from_checkpoint":
            state, _ = read_checkpoint(params["path"], workers=grid.workers)
            if state.grid != grid:
                raise ValidationError(
                    f"checkpoint grid (n={state.grid.n}, L={state.grid.box_length}, N={state.grid.n_components}) "
                    f"does not match the scenario grid",
                    pointer="/initial_data/path",
                )
            return state

        inner = self.build_initial_data(spec.inner, g, grid, seed)
        return inner.scaled(params["lambda"])

    # ------------------------------------------------------------------ #
    # reports

    def ground_state_report(self, g: GaugePolynomial, omega: float = 1.0, w: Optional[np.ndarray] = None,
                            n: Optional[int] = None, box_length: Optional[float] = None,
                            seed: int = 0) -> Dict[str, Any]:
        """q0, profile integrals, g_max, thresholds and the functionals of the built ground state"""
        n = n or self.config.grid_n
        box_length = box_length or self.config.box_length
        sphere, limits = self.thresholds(g, seed)
        if w is None:
            w = sphere.maximizers[0]
        spec = GroundStateSpec(omega=omega, g_max=sphere.g_max, w=np.asarray(w, dtype=complex))
        spec.validate_against(g)
        u = build_ground_state(spec, self.profile, self.grid(n, box_length, g.n_components),
                               max_spacing=self.config.ground_state_spacing)
        record = functionals(u, g, omega)
        profile = self.profile
        return {
            "q0": profile.q0,
            "integrals": profile.integrals,
            "pohozaev_ratios": list(profile.pohozaev_ratios()),
            "g_max": sphere.g_max,
            "maximizers": [[[v.real, v.imag] for v in m] for m in sphere.maximizers],
            "stationarity_residuals": sphere.stationarity_residuals(g),
            "thresholds": limits.as_dict(),
            "omega": omega,
            "w": [[v.real, v.imag] for v in spec.w],
            "grid": {"n": n, "L": box_length},
            "functionals": record.as_dict(),
        }

    def identity_report(self, g: GaugePolynomial, trials: int = 1000, seed: int = 0) -> Dict[str, Any]:
        reports = check_identities(g, trials=trials, seed=seed, tol=self.config.identity_tol)
        return {
            "polynomial": g.to_json(),
            "checks": [r.as_dict() for r in reports],
            "passed": all(r.passed for r in reports),
        }

    # ------------------------------------------------------------------ #
    # runs

    def _classify(self, u0: FieldState, g: GaugePolynomial, seed: int):
        """Thresholds and verdict, or (None, None) when no threshold exists or u0 = 0"""
        try:
            _, limits = self.thresholds(g, seed)
        except NonfocusingError as e:
            logger.warning("no ground-state threshold: %s", e)
            return None, None
        if not u0.data.any():
            return limits, None
        return limits, classify(u0, g, limits, self.config.classify_tol)

    def run_scenario(self, scenario: Scenario) -> RunSummary:
        """Precompute, classify, evolve and write the CSV and summary JSON of a scenario"""
        g = scenario.polynomial.build()
        grid = self.grid(scenario.grid.n, scenario.grid.L, g.n_components)
        u0 = self.build_initial_data(scenario.initial_data, g, grid, scenario.seed)
        return self._execute(scenario, g, u0, u0, echo=True)

    def resume(self, checkpoint: Path) -> RunSummary:
        """Continue the run that wrote `checkpoint` to its t_end"""
        checkpoint = Path(checkpoint)
        echo_path = checkpoint.parent / ECHO_NAME
        if not echo_path.exists():
            raise CheckpointError(f"no {ECHO_NAME} next to {checkpoint}")
        scenario = parse_scenario(read_scenario_file(echo_path), base=echo_path.parent, defaults=self.config)
        state, dt = read_checkpoint(checkpoint, workers=self.config.workers)
        if dt != scenario.evolution.dt:
            raise CheckpointError(f"checkpoint dt={dt} differs from the scenario dt={scenario.evolution.dt}")

        g = scenario.polynomial.build()
        grid = self.grid(scenario.grid.n, scenario.grid.L, g.n_components)
        if state.grid != grid:
            raise CheckpointError("checkpoint grid does not match its scenario")
        u0 = self.build_initial_data(scenario.initial_data, g, grid, scenario.seed)
        out = scenario.outputs
        resumed = scenario.with_outputs(csv=f"{Path(out.csv).stem}_resumed.csv",
                                        json=f"{Path(out.json).stem}_resumed.json")
        logger.info("resuming from %s at t=%.6f", checkpoint, state.t)
        return self._execute(resumed, g, state, u0, echo=False)

    def _execute(self, scenario: Scenario, g: GaugePolynomial, start: FieldState, u0: FieldState,
                 echo: bool) -> RunSummary:
        cfg = scenario.evolution
        limits, classification = self._classify(u0, g, scenario.seed)

        weight = VirialWeight(start.grid, scenario.diagnostics.R)
        t_wrap = wrap_time(u0, scenario.diagnostics.wrap_fraction)
        checkpoint_dir = scenario.outputs.checkpoints if cfg.checkpoint_every else None
        if checkpoint_dir is not None and echo:
            echo_scenario(scenario, checkpoint_dir)

        with DiagnosticsCollector(g, weight, scenario.outputs.csv_path, t_wrap,
                                  self.config.min_fit_points) as collector:
            result = simulate(start, g, cfg, sinks=[collector], checkpoint_dir=checkpoint_dir,
                              guard_reference=u0.gradient_norm())

        summary = self._summarize(scenario, start, result, collector, limits, classification)
        if scenario.diagnostics.boost_check:
            report = boost_covariance_check(u0, g, BoostParams(tuple(scenario.diagnostics.xi0)),
                                            min(cfg.t_end, t_wrap), cfg)
            summary["boost_check"] = report.as_dict()
        write_json(scenario.outputs.json_path, summary)
        verdict = classification.verdict.value if classification else None
        return RunSummary(status=result.status, verdict=verdict, summary=summary, result=result,
                          collector=collector)

    def _summarize(self, scenario, start, result, collector, limits, classification) -> Dict[str, Any]:
        virial = collector.virial_series()
        residual = virial.residual()
        H_max = max((r.H for r in result.records), default=0.0)
        tolerance = 1e-3 * float(np.max(np.abs(virial.K8))) + 1e-6 * H_max if virial.K8.size else 0.0
        return {
            "verdict": classification.verdict.value if classification else None,
            "classification": classification.as_dict() if classification else None,
            "thresholds": limits.as_dict() if limits else None,
            "status": result.status.value,
            "reason": result.reason,
            "t_start": start.t,
            "t_final": result.final.t,
            "steps": result.steps,
            "drifts": result.drifts(),
            "decay_fit": collector.scattering().as_dict(),
            "virial": {
                "R": virial.R,
                "constants": virial.constants,
                "max_remainder_residual": float(residual.max()) if residual.size else 0.0,
                "bound_holds": virial.bound_holds(tolerance=tolerance),
            },
            "stability": scenario.evolution.stability_metadata(start.grid),
            "artifacts": {
                "csv": str(scenario.outputs.csv_path),
                "checkpoints": [str(p) for p in result.checkpoints],
            },
        }

    # ------------------------------------------------------------------ #
    # sweeps

    def sweep_dichotomy(self, base: Scenario, lambdas: Sequence[float], run_simulations: bool = False) -> SweepResult:
        """Classify (and optionally evolve) lambda * u0 for every lambda; rows keep input order"""
        lambdas = [float(v) for v in lambdas]
        if len(lambdas) < 2:
            raise UsageError(f"a sweep needs at least 2 values of lambda, got {len(lambdas)}")
        if any(b <= a for a, b in zip(lambdas, lambdas[1:])):
            raise UsageError("lambda values must be strictly ascending")

        g = base.polynomial.build()
        grid = self.grid(base.grid.n, base.grid.L, g.n_components)
        u0 = self.build_initial_data(base.initial_data, g, grid, base.seed)
        _, limits = self.thresholds(g, base.seed)

        def row(scale: float) -> SweepRow:
            try:
                u = u0.scaled(scale)
                c: Classification = classify(u, g, limits, self.config.classify_tol)
                entry = SweepRow(scale=scale, mass_energy=c.mass_energy, K=c.K, verdict=c.verdict.value)
                if run_simulations:
                    entry.status = simulate(u, g, base.evolution).status.value
                return entry
            except GNLSError as e:
                logger.warning("sweep row lambda=%g failed: %s", scale, e)
                return SweepRow(scale=scale, error=str(e))

        workers = self.config.workers or 1
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(row, lambdas))

        result = SweepResult(rows=rows, thresholds=limits)
        ok = [r for r in rows if not r.failed]
        for a, b in zip(ok, ok[1:]):
            if a.verdict != b.verdict:
                result.transitions.append({"lower": a.scale, "upper": b.scale, "from": a.verdict, "to": b.verdict})
        return result

    def write_sweep(self, sweep: SweepResult, directory: Path) -> Dict[str, Path]:
        """sweep.json and sweep.csv under `directory`"""
        directory = Path(directory)
        json_path = directory / "sweep.json"
        csv_path = directory / "sweep.csv"
        write_json(json_path, sweep.as_dict())
        try:
            with open(csv_path, "w", encoding="utf-8", newline="") as f:
                writer = csv.DictWriter(f, fieldnames=list(SweepRow(0.0).as_dict()), lineterminator="\n")
                writer.writeheader()
                for r in sweep.rows:
                    writer.writerow(r.as_dict())
        except OSError as e:
            raise CheckpointError(f"Failed to write {csv_path}: {e}") from e
        return {"json": json_path, "csv": csv_path}

