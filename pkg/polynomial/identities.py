# polynomial/identities.py
"""Randomized machine checks of the structural identities behind the conservation laws."""
from dataclasses import asdict, dataclass
from typing import Dict, List

import numpy as np

from errors import ArgumentError
from .gauge_polynomial import GaugePolynomial


@dataclass
class IdentityReport:
    """Outcome of one randomized identity check"""
    name: str
    trials: int
    seed: int
    max_deviation: float
    tolerance: float
    passed: bool

    def as_dict(self) -> Dict:
        return asdict(self)


def _random_points(n: int, trials: int, rng: np.random.Generator) -> np.ndarray:
    return rng.standard_normal((n, trials)) + 1j * rng.standard_normal((n, trials))


def _report(name, trials, seed, deviation, allowed, tol) -> IdentityReport:
    return IdentityReport(
        name=name,
        trials=trials,
        seed=seed,
        max_deviation=float(np.max(deviation)) if deviation.size else 0.0,
        tolerance=tol,
        passed=bool(np.all(deviation <= allowed)),
    )


def _check_trials(trials: int):
    if trials < 1:
        raise ArgumentError(f"trials must be >= 1, got {trials}")


def check_gauge_invariance(g: GaugePolynomial, trials: int = 1000, seed: int = 0,
                           tol: float = 1e-10) -> IdentityReport:
    """max |g(e^{i theta} z) - g(z)| over random z, theta"""
    _check_trials(trials)
    rng = np.random.default_rng(seed)
    z = _random_points(g.n_components, trials, rng)
    theta = rng.uniform(0.0, 2.0 * np.pi, trials)
    base = g.evaluate(z)
    rotated = g.evaluate(np.exp(1j * theta) * z)
    deviation = np.abs(rotated - base)
    return _report("gauge_invariance", trials, seed, deviation, tol * (1.0 + np.abs(base)), tol)


def check_charge_identity(g: GaugePolynomial, trials: int = 1000, seed: int = 0,
                          tol: float = 1e-10) -> IdentityReport:
    """max |sum_j Im(F_j(z) conj(z_j))|, which must vanish"""
    _check_trials(trials)
    rng = np.random.default_rng(seed)
    z = _random_points(g.n_components, trials, rng)
    charge = np.sum(np.imag(g.nonlinearity(z) * np.conj(z)), axis=0)
    size = np.sum(np.abs(z) ** 2, axis=0) ** 2
    return _report("charge_identity", trials, seed, np.abs(charge), tol * (1.0 + size), tol)


def check_euler_identity(g: GaugePolynomial, trials: int = 1000, seed: int = 0,
                         tol: float = 1e-10) -> IdentityReport:
    """max |sum_j Re(F_j(z) conj(z_j)) - g(z)| (Euler's theorem for the quartic)"""
    _check_trials(trials)
    rng = np.random.default_rng(seed)
    z = _random_points(g.n_components, trials, rng)
    euler = np.sum(np.real(g.nonlinearity(z) * np.conj(z)), axis=0)
    size = np.sum(np.abs(z) ** 2, axis=0) ** 2
    return _report("euler_identity", trials, seed, np.abs(euler - g.evaluate(z)), tol * (1.0 + size), tol)


def wirtinger_difference(g: GaugePolynomial, z: np.ndarray, h: float = 1e-5) -> np.ndarray:
    """Central-difference estimate of F = 1/2 dg/d conj(z) = 1/4 (d_x + i d_y) g"""
    z = np.asarray(z, dtype=complex)
    out = np.zeros(z.shape, dtype=complex)
    for j in range(g.n_components):
        step = np.zeros(z.shape, dtype=complex)
        step[j] = h
        d_re = (g.evaluate(z + step) - g.evaluate(z - step)) / (2.0 * h)
        d_im = (g.evaluate(z + 1j * step) - g.evaluate(z - 1j * step)) / (2.0 * h)
        out[j] = 0.25 * (d_re + 1j * d_im)
    return out


def check_wirtinger(g: GaugePolynomial, trials: int = 1000, seed: int = 0,
                    tol: float = 1e-6, h: float = 1e-5) -> IdentityReport:
    """max |F(z) - finite-difference Wirtinger derivative of g|"""
    _check_trials(trials)
    rng = np.random.default_rng(seed)
    z = _random_points(g.n_components, trials, rng)
    deviation = np.max(np.abs(g.nonlinearity(z) - wirtinger_difference(g, z, h)), axis=0)
    size = np.sum(np.abs(z) ** 2, axis=0) ** 1.5
    return _report("wirtinger", trials, seed, deviation, tol * (1.0 + size), tol)


def check_identities(g: GaugePolynomial, trials: int = 1000, seed: int = 0,
                     tol: float = 1e-10) -> List[IdentityReport]:
    """Run every identity check with a shared seed"""
    return [
        check_gauge_invariance(g, trials, seed, tol),
        check_charge_identity(g, trials, seed, tol),
        check_euler_identity(g, trials, seed, tol),
        check_wirtinger(g, trials, seed),
    ]
