# variational/profile.py
"""Positive radial solution Q of -Q'' - (2/r) Q' + Q = Q^3 in three dimensions.

Primary method: bisection shooting on Q(0) with a DOP853 integrator, with the
far field continued by the linearized decay Q ~ c e^{-r} / r. An independent
spectral renormalization iteration on v = rQ serves as a cross-check.
"""
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Tuple

import numpy as np
from scipy import fft as sfft
from scipy.integrate import solve_ivp, trapezoid
from scipy.interpolate import CubicSpline

from errors import ArgumentError, ResolutionError, ShootingError

logger = logging.getLogger(__name__)

_R_START = 1e-4
_MATCH_LEVEL = 1e-4
_DECAY_LEVEL = 1e-8


@dataclass(frozen=True)
class RadialProfile:
    """Sampled Q on a uniform radial grid with its R^3 integrals"""
    r: np.ndarray
    Q: np.ndarray
    dQ: np.ndarray
    q0: float
    r_match: float = field(default=np.inf)

    @property
    def r_max(self) -> float:
        return float(self.r[-1])

    def _radial_integral(self, values: np.ndarray) -> float:
        return float(4.0 * np.pi * trapezoid(values * self.r ** 2, self.r))

    @cached_property
    def mass_integral(self) -> float:
        """int Q^2 over R^3"""
        return self._radial_integral(self.Q ** 2)

    @cached_property
    def gradient_integral(self) -> float:
        """int |grad Q|^2 over R^3"""
        return self._radial_integral(self.dQ ** 2)

    @cached_property
    def quartic_integral(self) -> float:
        """int Q^4 over R^3"""
        return self._radial_integral(self.Q ** 4)

    @property
    def integrals(self) -> dict:
        return {
            "int_Q2": self.mass_integral,
            "int_gradQ2": self.gradient_integral,
            "int_Q4": self.quartic_integral,
        }

    def pohozaev_ratios(self) -> Tuple[float, float]:
        """(int|grad Q|^2 / int Q^2, int Q^4 / int Q^2); both are 3 and 4 exactly"""
        return (self.gradient_integral / self.mass_integral, self.quartic_integral / self.mass_integral)

    @cached_property
    def _spline(self) -> CubicSpline:
        return CubicSpline(self.r, self.Q, bc_type=((1, 0.0), (1, float(self.dQ[-1]))))

    def __call__(self, radius) -> np.ndarray:
        """Q at arbitrary radii; zero beyond r_max"""
        radius = np.asarray(radius, dtype=float)
        inside = radius <= self.r_max
        return np.where(inside, self._spline(np.minimum(radius, self.r_max)), 0.0)


def _rhs(r, y):
    q, p = y
    return [p, -2.0 * p / r + q - q ** 3]


def _crosses_zero(r, y):
    return y[0]


_crosses_zero.terminal = True
_crosses_zero.direction = -1


def _turns_up(r, y):
    return y[1]


_turns_up.terminal = True
_turns_up.direction = 1


def _initial_state(q0: float):
    # Taylor start: Q = q0 + (q0 - q0^3) r^2 / 6
    c = (q0 - q0 ** 3) / 6.0
    return [q0 + c * _R_START ** 2, 2.0 * c * _R_START]


def _shoot(q0: float, r_end: float, **kwargs):
    sol = solve_ivp(
        _rhs, (_R_START, r_end), _initial_state(q0), method="DOP853",
        events=(_crosses_zero, _turns_up), rtol=1e-12, atol=1e-15, **kwargs,
    )
    if sol.t_events[0].size:
        return "over", sol
    if sol.t_events[1].size:
        return "under", sol
    return "none", sol


def _bisect(bracket: Tuple[float, float], r_end: float, max_bisections: int = 200):
    lo, hi = bracket
    kind_lo, _ = _shoot(lo, r_end)
    kind_hi, _ = _shoot(hi, r_end)
    if kind_lo != "under" or kind_hi != "over":
        raise ShootingError(
            f"Failed to bracket Q(0) in [{lo}, {hi}]: endpoints behave as {kind_lo!r}/{kind_hi!r}"
        )

    for it in range(max_bisections):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        kind, _ = _shoot(mid, r_end)
        if kind == "over":
            hi = mid
        elif kind == "under":
            lo = mid
        else:
            # trajectories indistinguishable up to r_end
            lo = hi = mid
            break
        logger.debug("bisection %d: Q(0) in [%.15f, %.15f]", it, lo, hi)
    return lo, hi


def solve_scalar_Q(tol: float = 1e-10, r_max: float = 30.0, dr: float = 1e-3,
                   bracket: Tuple[float, float] = (1.05, 10.0)) -> RadialProfile:
    """Shooting solution of the scalar ground-state ODE sampled on [0, r_max]"""
    if tol <= 0:
        raise ArgumentError("tol must be positive")
    if not 0 < dr < r_max:
        raise ArgumentError("dr must lie in (0, r_max)")
    if np.exp(-r_max) > tol:
        raise ResolutionError(f"r_max={r_max} too small for tol={tol}: e^(-r_max) exceeds tol")

    lo, hi = _bisect(bracket, r_max)
    q0 = 0.5 * (lo + hi)
    if hi - lo > tol * q0:
        raise ResolutionError(f"Failed to reach tol={tol}: Q(0) bracket [{lo}, {hi}] stalled")
    logger.info("shooting converged: Q(0) = %.12f (bracket width %.2e)", q0, hi - lo)

    r = dr * np.arange(int(round(r_max / dr)) + 1)
    _, sol = _shoot(q0, r_max, dense_output=True, max_step=dr)
    r_trust = sol.t[-1]

    # match to the linear tail once Q is small enough that Q^3 is negligible
    tail = r[(r > _R_START) & (r <= r_trust)]
    q_tail = sol.sol(tail)[0]
    below = np.nonzero(q_tail <= _MATCH_LEVEL * q0)[0]
    if below.size == 0:
        raise ResolutionError(
            f"Failed to resolve the decaying tail: trajectory left the ground state at r={r_trust:.2f}"
        )
    r_match = float(tail[below[0]])
    q_match = float(q_tail[below[0]])
    c = q_match * r_match * np.exp(r_match)

    Q = np.empty_like(r)
    dQ = np.empty_like(r)
    inner = r <= r_match
    Q[0], dQ[0] = q0, 0.0
    states = sol.sol(r[inner][1:])
    Q[inner] = np.concatenate(([q0], states[0]))
    dQ[inner] = np.concatenate(([0.0], states[1]))
    outer = ~inner
    Q[outer] = c * np.exp(-r[outer]) / r[outer]
    dQ[outer] = -Q[outer] * (1.0 + 1.0 / r[outer])

    if np.any(Q[:-1] <= 0) or np.any(np.diff(Q) >= 0):
        raise ResolutionError("Failed to produce a positive decreasing profile")
    if Q[-1] > _DECAY_LEVEL * q0:
        raise ResolutionError(f"r_max={r_max} too small: Q(r_max)/Q(0) = {Q[-1] / q0:.2e}")
    return RadialProfile(r=r, Q=Q, dQ=dQ, q0=q0, r_match=r_match)


@dataclass(frozen=True)
class RenormalizedProfile:
    """Result of the spectral renormalization iteration"""
    q0: float
    r: np.ndarray
    Q: np.ndarray
    iterations: int
    residual: float

    @property
    def mass_integral(self) -> float:
        return float(4.0 * np.pi * trapezoid(self.Q ** 2 * self.r ** 2, self.r))


def solve_scalar_Q_renormalized(half_width: float = 30.0, points: int = 4096, tol: float = 1e-12,
                                max_iter: int = 2000) -> RenormalizedProfile:
    """Petviashvili iteration for v = rQ, which solves -v'' + v = v^3 / r^2 (odd in r)."""
    h = 2.0 * half_width / points
    x = -half_width + h * (np.arange(points) + 0.5)
    k = 2.0 * np.pi * sfft.fftfreq(points, d=h)
    symbol = 1.0 + k ** 2

    v = x * 3.0 * np.exp(-0.5 * x ** 2)
    residual = np.inf
    for it in range(1, max_iter + 1):
        nonlinear = v ** 3 / x ** 2
        v_hat = sfft.fft(v)
        n_hat = sfft.fft(nonlinear)
        stabilizer = np.real(np.sum(symbol * np.abs(v_hat) ** 2)) / np.real(np.sum(np.conj(v_hat) * n_hat))
        v_new = np.real(sfft.ifft(stabilizer ** 1.5 * n_hat / symbol))
        residual = float(np.max(np.abs(v_new - v)) / np.max(np.abs(v_new)))
        v = v_new
        if residual <= tol:
            break
    else:
        raise ShootingError(f"Failed to converge renormalization iteration: residual {residual:.2e}")

    # Q(0) = v'(0), evaluated from the Fourier series at x = 0
    v_hat = sfft.fft(v)
    dk = 1j * k
    dk[points // 2] = 0.0
    q0 = float(np.real(np.sum(dk * v_hat * np.exp(-1j * k * x[0]))) / points)

    positive = x > 0
    r = x[positive]
    return RenormalizedProfile(q0=q0, r=r, Q=v[positive] / r, iterations=it, residual=residual)
