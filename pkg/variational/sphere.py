# variational/sphere.py
import logging
from dataclasses import dataclass, field
from typing import List

import numpy as np

from errors import ArgumentError, NonfocusingError, OptimizerError
from polynomial import GaugePolynomial

logger = logging.getLogger(__name__)


@dataclass
class SphereMaximum:
    """g_max and a phase-deduplicated sample of its maximizers T_0"""
    g_max: float
    maximizers: List[np.ndarray] = field(default_factory=list)
    converged_restarts: int = 0
    restarts: int = 0

    def stationarity_residuals(self, g: GaugePolynomial) -> List[float]:
        return [stationarity_residual(g, w, self.g_max) for w in self.maximizers]


def stationarity_residual(g: GaugePolynomial, w: np.ndarray, g_max: float) -> float:
    """|d g / d conj(z) (w) - 2 g_max w|, which vanishes exactly on T_0"""
    return float(np.linalg.norm(2.0 * g.nonlinearity(w) - 2.0 * g_max * w))


def _normalize(z: np.ndarray) -> np.ndarray:
    return z / np.linalg.norm(z, axis=0, keepdims=True)


def _canonical_phase(w: np.ndarray) -> np.ndarray:
    # rotate so the largest component is real and positive
    lead = w[np.argmax(np.abs(w))]
    return w * np.conj(lead) / abs(lead)


def _deduplicate(candidates: List[np.ndarray], tol: float) -> List[np.ndarray]:
    kept: List[np.ndarray] = []
    for w in candidates:
        # unit vectors agree modulo phase iff |<w, v>| = 1
        if all(abs(np.vdot(v, w)) < 1.0 - tol for v in kept):
            kept.append(w)
    return kept


def ascend_on_sphere(g: GaugePolynomial, starts: np.ndarray, max_iter: int = 10_000,
                     stationarity_tol: float = 1e-10):
    """Projected gradient ascent of g on S^{2N-1} for a batch of starts (shape (N, B)).

    Returns final points, values and a convergence mask.
    """
    z = _normalize(np.asarray(starts, dtype=complex))
    active = np.ones(z.shape[1], dtype=bool)
    for it in range(max_iter):
        grad = 4.0 * g.nonlinearity(z)  # real gradient (d/dx + i d/dy) g = 2 dg/d conj(z)
        radial = np.real(np.sum(np.conj(z) * grad, axis=0))
        tangent = grad - radial * z
        residual = np.linalg.norm(tangent, axis=0) / 2.0
        active &= residual > stationarity_tol
        if not active.any():
            break
        step = 0.1 / (1.0 + np.linalg.norm(grad, axis=0) / 2.0)
        z[:, active] = _normalize(z[:, active] + step[active] * tangent[:, active])
    values = g.evaluate(z)
    return z, values, ~active


def maximize_g_on_sphere(g: GaugePolynomial, restarts: int = 200, seed: int = 0, max_iter: int = 10_000,
                         stationarity_tol: float = 1e-10, dedup_tol: float = 1e-6) -> SphereMaximum:
    """g_max = max of g over |z| = 1 and sampled maximizers"""
    if restarts < 1:
        raise ArgumentError(f"restarts must be >= 1, got {restarts}")
    rng = np.random.default_rng(seed)
    n = g.n_components
    starts = rng.standard_normal((n, restarts)) + 1j * rng.standard_normal((n, restarts))
    z, values, converged = ascend_on_sphere(g, starts, max_iter, stationarity_tol)

    if not converged.any():
        raise OptimizerError(f"Failed to converge any of {restarts} restarts in {max_iter} iterations")
    if converged.sum() < restarts:
        logger.warning("%d of %d sphere restarts did not converge", restarts - converged.sum(), restarts)

    g_max = float(np.max(values[converged]))
    if g_max <= 0.0:
        raise NonfocusingError(f"g_max = {g_max:.3e} <= 0: no ground state exists")

    order = np.argsort(-values)
    candidates = [
        _canonical_phase(z[:, i]) for i in order
        if converged[i] and values[i] >= g_max - 1e-8 * max(1.0, g_max)
    ]
    maximizers = _deduplicate(candidates, dedup_tol)
    logger.info("g_max = %.12f with %d distinct maximizers", g_max, len(maximizers))
    return SphereMaximum(g_max=g_max, maximizers=maximizers, converged_restarts=int(converged.sum()),
                         restarts=restarts)
