# diagnostics/boost.py
"""Galilean boosts e^{i x.xi} and the covariance of the flow under them"""
import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from errors import ArgumentError
from polynomial import GaugePolynomial
from solver.grid import FieldState
from solver.stepper import EvolutionConfig, evolve
from variational.functionals import functionals

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BoostParams:
    """Frequency shift xi0"""
    xi0: Tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        xi = tuple(float(v) for v in self.xi0)
        if len(xi) != 3:
            raise ArgumentError(f"xi0 must have three entries, got {len(xi)}")
        if not np.all(np.isfinite(xi)):
            raise ArgumentError(f"xi0 must be finite, got {xi}")
        object.__setattr__(self, "xi0", xi)

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.xi0)

    @classmethod
    def on_lattice(cls, grid, indices: Sequence[int]) -> "BoostParams":
        """xi0 = (2 pi / L) m for an integer vector m, which keeps boosts periodic"""
        step = 2.0 * np.pi / grid.box_length
        return cls(tuple(step * int(m) for m in indices))


def _phase(u: FieldState, xi: np.ndarray) -> np.ndarray:
    x, y, z = u.grid.coordinates
    return np.exp(1j * (xi[0] * x + xi[1] * y + xi[2] * z))


def boost(u: FieldState, p: BoostParams) -> FieldState:
    """Multiply every component by e^{i x.xi0}"""
    xi = p.vector
    if not xi.any():
        return u.copy()
    return u.with_data(_phase(u, xi)[None] * u.data)


def galilean_transform(u: FieldState, p: BoostParams, t: float) -> FieldState:
    """e^{i x.xi0} e^{-i t |xi0|^2} u(x - 2 xi0 t), the translation applied spectrally"""
    xi = p.vector
    shifted = u.translated(2.0 * xi * t)
    return shifted.with_data(np.exp(-1j * t * xi.dot(xi)) * _phase(u, xi)[None] * shifted.data)


@dataclass(frozen=True)
class BoostCovarianceReport:
    xi0: Tuple[float, float, float]
    t_end: float
    discrepancy: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.discrepancy <= self.tolerance

    def as_dict(self) -> dict:
        return {"xi0": list(self.xi0), "t_end": self.t_end, "discrepancy": self.discrepancy,
                "tolerance": self.tolerance, "passed": self.passed}


def boost_covariance_check(u0: FieldState, g: GaugePolynomial, xi0: BoostParams, t_end: float,
                           cfg: EvolutionConfig, tolerance: float = 1e-5) -> BoostCovarianceReport:
    """Compare evolve(boost(u0)) with the Galilean image of evolve(u0) at t_end"""
    shift = 2.0 * np.linalg.norm(xi0.vector) * abs(t_end - u0.t)
    if shift > 0.25 * u0.grid.box_length:
        raise ArgumentError(
            f"translation 2|xi0|t = {shift:.3f} exceeds a quarter of the box; the comparison would wrap"
        )
    run = EvolutionConfig(dt=cfg.dt, t_end=t_end, substeps_nl=cfg.substeps_nl,
                          renormalize_density=cfg.renormalize_density)
    start = u0.copy()
    start.t = 0.0
    moving = evolve(boost(start, xi0), g, run)
    reference = galilean_transform(evolve(start, g, run), xi0, moving.t)

    diff = np.sqrt(moving.grid.integrate(np.sum(np.abs(moving.data - reference.data) ** 2, axis=0)))
    norm = reference.l2_norm()
    discrepancy = float(diff / norm) if norm > 0 else float(diff)
    logger.info("boost covariance at xi0=%s: discrepancy %.3e", xi0.xi0, discrepancy)
    return BoostCovarianceReport(xi0=xi0.xi0, t_end=float(moving.t), discrepancy=discrepancy, tolerance=tolerance)


def zero_momentum_boost(u: FieldState, g: Optional[GaugePolynomial] = None):
    """Boost by xi0 = -P/(2M); returns (boosted field, params, predicted energy E - |P|^2/(4M))"""
    g = g if g is not None else GaugePolynomial(u.n_components)
    record = functionals(u, g)
    if record.M <= 0:
        raise ArgumentError("momentum-zeroing boost needs positive mass")
    params = BoostParams(tuple(-record.P / (2.0 * record.M)))
    predicted = record.E - float(record.P.dot(record.P)) / (4.0 * record.M)
    return boost(u, params), params, predicted


def boost_energy_vertex(u: FieldState, g: GaugePolynomial, center: Sequence[float] = (0.0, 0.0, 0.0),
                        spacing: Optional[float] = None, points: int = 3) -> np.ndarray:
    """Vertex of the quadratic fitted to E(boost(u)) on a cube of xi0 values.

    The default spacing is one lattice frequency 2 pi / L, where the boost is
    exact on the torus.
    """
    if points < 3:
        raise ArgumentError("a quadratic fit needs at least 3 points per axis")
    spacing = 2.0 * np.pi / u.grid.box_length if spacing is None else spacing
    offsets = spacing * (np.arange(points) - (points - 1) / 2.0)
    center = np.asarray(center, dtype=float)
    xis = np.array([center + np.array([a, b, c]) for a in offsets for b in offsets for c in offsets])
    energies = np.array([functionals(boost(u, BoostParams(tuple(xi))), g).E for xi in xis])

    # E(xi) = c + b.xi + xi^T A xi with A symmetric
    x, y, z = xis.T
    design = np.column_stack([np.ones_like(x), x, y, z, x * x, y * y, z * z, x * y, x * z, y * z])
    coef, *_ = np.linalg.lstsq(design, energies, rcond=None)
    b = coef[1:4]
    A = np.array([
        [coef[4], coef[7] / 2, coef[8] / 2],
        [coef[7] / 2, coef[5], coef[9] / 2],
        [coef[8] / 2, coef[9] / 2, coef[6]],
    ])
    return np.linalg.solve(2.0 * A, -b)
