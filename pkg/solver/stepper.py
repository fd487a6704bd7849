# solver/stepper.py
"""Strang split-step Fourier integrator for i u_t + Delta u + F(u) = 0 on the torus"""
from dataclasses import dataclass, fields
from functools import lru_cache
from typing import Optional

import numpy as np

from errors import ConfigurationError, OverflowGuardError
from polynomial import GaugePolynomial
from .grid import FieldState, GridDescriptor

# dt <= safety * dx^2 is only recorded, never enforced
STABILITY_SAFETY = 0.5


@dataclass(frozen=True)
class EvolutionConfig:
    """Time stepping, guard and output cadence of one run"""
    dt: float = 1e-3
    t_end: float = 1.0
    substeps_nl: int = 2
    guard_grad_factor: float = 10.0
    snapshot_every: int = 10
    checkpoint_every: int = 0
    renormalize_density: bool = False

    def __post_init__(self):
        if not np.isfinite(self.dt) or self.dt == 0:
            raise ConfigurationError(f"dt must be finite and nonzero, got {self.dt}", pointer="/evolution/dt")
        if not np.isfinite(self.t_end):
            raise ConfigurationError("t_end must be finite", pointer="/evolution/t_end")
        if self.substeps_nl < 1:
            raise ConfigurationError("substeps_nl must be >= 1", pointer="/evolution/substeps_nl")
        if self.guard_grad_factor <= 1:
            raise ConfigurationError("guard_grad_factor must exceed 1", pointer="/evolution/guard_grad_factor")
        if self.snapshot_every < 1:
            raise ConfigurationError("snapshot_every must be >= 1", pointer="/evolution/snapshot_every")
        if self.checkpoint_every < 0:
            raise ConfigurationError("checkpoint_every must be >= 0", pointer="/evolution/checkpoint_every")

    def step_index(self, t: float) -> int:
        """Global step index of time t on the dt lattice"""
        return int(round(t / self.dt))

    def stability_metadata(self, grid: GridDescriptor) -> dict:
        bound = STABILITY_SAFETY * grid.dx ** 2
        return {"dt": self.dt, "dt_heuristic_bound": bound, "within_heuristic": abs(self.dt) <= bound}

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@lru_cache(maxsize=8)
def _free_multiplier(grid: GridDescriptor, tau: float) -> np.ndarray:
    return np.exp(-1j * grid.k_squared * tau)


def linear_step(u: FieldState, tau: float) -> FieldState:
    """Free propagator U(tau): multiply by e^{-i |k|^2 tau} in Fourier space.

    Fractional flows leave the time stamp alone; strang_step advances it.
    """
    if tau == 0:
        return u.copy()
    grid = u.grid
    return u.with_data(grid.ifft(_free_multiplier(grid, float(tau)) * grid.fft(u.data)))


def _project_density(z: np.ndarray, density: np.ndarray) -> np.ndarray:
    current = np.sum(np.abs(z) ** 2, axis=0)
    factor = np.sqrt(np.divide(density, current, out=np.ones_like(current), where=current > 0))
    return z * factor


def nonlinear_step(u: FieldState, g: GaugePolynomial, tau: float, substeps: int = 2,
                   renormalize: bool = False) -> FieldState:
    """Pointwise flow du/dt = i F(u) over tau by classical RK4 in `substeps` pieces"""
    if substeps < 1:
        raise ConfigurationError(f"substeps must be >= 1, got {substeps}")
    if g.is_zero() or tau == 0:
        return u.copy()

    h = tau / substeps
    z = u.data.copy()
    density = np.sum(np.abs(z) ** 2, axis=0) if renormalize else None

    def rhs(v):
        return 1j * g.nonlinearity(v)

    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(substeps):
            k1 = rhs(z)
            k2 = rhs(z + 0.5 * h * k1)
            k3 = rhs(z + 0.5 * h * k2)
            k4 = rhs(z + h * k3)
            z = z + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    if not np.all(np.isfinite(z)):
        raise OverflowGuardError(f"nonlinear step at t={u.t} produced non-finite values")
    if renormalize:
        z = _project_density(z, density)
    return u.with_data(z)


def strang_step(u: FieldState, g: GaugePolynomial, dt: float, cfg: Optional[EvolutionConfig] = None) -> FieldState:
    """L(dt/2) N(dt) L(dt/2); negative dt runs the composition backward"""
    cfg = cfg or EvolutionConfig(dt=dt)
    if g.is_zero():
        out = linear_step(u, dt)
    else:
        half = linear_step(u, 0.5 * dt)
        half = nonlinear_step(half, g, dt, cfg.substeps_nl, cfg.renormalize_density)
        out = linear_step(half, 0.5 * dt)
    out.t = u.t + dt
    return out


def evolve(u: FieldState, g: GaugePolynomial, cfg: EvolutionConfig, steps: Optional[int] = None) -> FieldState:
    """Plain stepping loop without diagnostics or guard"""
    if steps is None:
        steps = cfg.step_index(cfg.t_end) - cfg.step_index(u.t)
    if steps < 0:
        raise ConfigurationError(f"t_end={cfg.t_end} is behind t={u.t} for dt={cfg.dt}")
    start = cfg.step_index(u.t)
    for k in range(1, steps + 1):
        u = strang_step(u, g, cfg.dt, cfg)
        u.t = (start + k) * cfg.dt
    return u
