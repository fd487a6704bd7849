# solver/simulation.py
import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Union

import numpy as np

from errors import ArgumentError, CheckpointError, ConfigurationError, OverflowGuardError
from polynomial import GaugePolynomial
from variational.functionals import FunctionalRecord, functionals
from .checkpoint import checkpoint_name, write_checkpoint
from .grid import FieldState
from .stepper import EvolutionConfig, strang_step

logger = logging.getLogger(__name__)

Sink = Callable[[FieldState, FunctionalRecord], None]


class RunStatus(str, Enum):
    COMPLETED = "Completed"
    BLOWUP = "Blowup"


def _relative_drift(values: np.ndarray, scale: float) -> float:
    if values.size == 0:
        return 0.0
    deviation = float(np.max(np.abs(values - values[0])))
    return deviation / scale if scale > 0 else deviation


@dataclass
class RunResult:
    """Outcome of one evolution"""
    status: RunStatus
    final: FieldState
    steps: int
    records: List[FunctionalRecord] = field(default_factory=list)
    snapshots: List[FieldState] = field(default_factory=list)
    reason: Optional[str] = None
    checkpoints: List[Path] = field(default_factory=list)

    @property
    def times(self) -> np.ndarray:
        return np.array([r.t for r in self.records])

    def drifts(self) -> Dict[str, float]:
        """Maximum deviation of M, E and P from their first recorded values.

        M and E are relative to their initial magnitude; P is relative to
        ||u|| ||grad u||, which bounds |P|.
        """
        if not self.records:
            return {"M": 0.0, "E": 0.0, "P": 0.0}
        first = self.records[0]
        M = np.array([r.M for r in self.records])
        E = np.array([r.E for r in self.records])
        P = np.array([r.P for r in self.records])
        p_dev = float(np.max(np.linalg.norm(P - P[0], axis=1)))
        p_scale = first.norm_product
        return {
            "M": _relative_drift(M, abs(first.M)),
            "E": _relative_drift(E, abs(first.E)),
            "P": p_dev / p_scale if p_scale > 0 else p_dev,
        }

    def as_dict(self) -> dict:
        return {
            "status": self.status.value,
            "t_final": self.final.t,
            "steps": self.steps,
            "reason": self.reason,
            "drifts": self.drifts(),
        }


def _emit(state: FieldState, g: GaugePolynomial, sinks: Sequence[Sink], result: RunResult, keep: bool):
    record = functionals(state, g)
    result.records.append(record)
    if keep:
        result.snapshots.append(state.copy())
    for sink in sinks:
        try:
            sink(state, record)
        except OSError as e:
            raise CheckpointError(f"Failed to write diagnostics at t={state.t}: {e}") from e
    return record


def simulate(u0: FieldState, g: GaugePolynomial, cfg: EvolutionConfig, sinks: Sequence[Sink] = (),
             checkpoint_dir: Union[str, Path, None] = None, keep_snapshots: bool = False,
             guard_reference: Optional[float] = None) -> RunResult:
    """Advance u0 to cfg.t_end by Strang steps, emitting a record every snapshot_every steps.

    Times live on the lattice k * dt, k being the global step index, so a run
    restarted from a checkpoint reproduces the uninterrupted one exactly.
    `guard_reference` is the gradient norm the blowup guard compares to
    (defaults to that of u0).
    """
    if g.n_components != u0.n_components:
        raise ArgumentError(
            f"polynomial has {g.n_components} components, field has {u0.n_components}"
        )
    start = cfg.step_index(u0.t)
    stop = cfg.step_index(cfg.t_end)
    if stop < start:
        raise ConfigurationError(f"t_end={cfg.t_end} is not reachable from t={u0.t} with dt={cfg.dt}")

    reference = u0.gradient_norm() if guard_reference is None else guard_reference
    limit = cfg.guard_grad_factor * reference
    checkpoint_dir = Path(checkpoint_dir) if checkpoint_dir is not None else None

    state = u0.copy()
    state.t = start * cfg.dt
    result = RunResult(status=RunStatus.COMPLETED, final=state, steps=0)
    _emit(state, g, sinks, result, keep_snapshots)
    logger.info("simulating %d steps from t=%.4f to t=%.4f", stop - start, state.t, stop * cfg.dt)

    for k in range(start + 1, stop + 1):
        try:
            state = strang_step(state, g, cfg.dt, cfg)
        except OverflowGuardError as e:
            result.status, result.reason = RunStatus.BLOWUP, str(e)
            break
        state.t = k * cfg.dt
        result.steps += 1
        result.final = state

        if reference > 0:
            grad = state.gradient_norm()
            if not np.isfinite(grad) or grad > limit:
                result.status = RunStatus.BLOWUP
                result.reason = f"||grad u|| = {grad:.3e} exceeds {cfg.guard_grad_factor} x initial at t={state.t:.4f}"
                if state.is_finite():
                    _emit(state, g, sinks, result, keep_snapshots)
                break

        if k % cfg.snapshot_every == 0 or k == stop:
            _emit(state, g, sinks, result, keep_snapshots)
        if checkpoint_dir is not None and cfg.checkpoint_every and k % cfg.checkpoint_every == 0:
            result.checkpoints.append(write_checkpoint(checkpoint_dir / checkpoint_name(k), state, cfg.dt))

    if result.status is RunStatus.BLOWUP:
        logger.warning("run stopped early: %s", result.reason)
    else:
        logger.info("run completed at t=%.4f", result.final.t)
    return result
