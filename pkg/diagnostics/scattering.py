# diagnostics/scattering.py
import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.integrate import cumulative_trapezoid

from errors import ArgumentError
from solver.grid import FieldState

logger = logging.getLogger(__name__)


def l4_norm(u: FieldState) -> float:
    """(sum_j ||u_j||_{L^4}^2)^{1/2}"""
    per_component = np.array([u.grid.integrate(np.abs(c) ** 4) for c in u.data]) ** 0.25
    return float(np.sqrt(np.sum(per_component ** 2)))


def wrap_time(u: FieldState, fraction: float = 0.99) -> float:
    """L / (2 v_max) with v_max = 2 |k| at the `fraction` quantile of spectral mass"""
    if not 0 < fraction < 1:
        raise ArgumentError(f"fraction must lie in (0, 1), got {fraction}")
    power = np.sum(np.abs(u.spectrum()) ** 2, axis=0).ravel()
    total = power.sum()
    if total == 0:
        return np.inf
    k = np.sqrt(u.grid.k_squared).ravel()
    order = np.argsort(k, kind="stable")
    cumulative = np.cumsum(power[order])
    index = min(int(np.searchsorted(cumulative, fraction * total)), k.size - 1)
    k_q = float(k[order][index])
    if k_q == 0:
        return np.inf
    return u.grid.box_length / (2.0 * 2.0 * k_q)


@dataclass
class ScatteringReport:
    """Decay metrics along a trajectory"""
    times: np.ndarray
    L4: np.ndarray
    S_norm: np.ndarray
    t_wrap: float = np.inf
    exponent: Optional[float] = None
    fit_window: Optional[tuple] = None
    tail_monotone: Optional[bool] = None
    notes: list = field(default_factory=list)

    @property
    def fit_available(self) -> bool:
        return self.exponent is not None

    def as_dict(self) -> dict:
        return {
            "t_wrap": self.t_wrap if np.isfinite(self.t_wrap) else None,
            "decay_exponent": self.exponent,
            "fit_window": list(self.fit_window) if self.fit_window else None,
            "tail_monotone_decreasing": self.tail_monotone,
            "S_norm_final": float(self.S_norm[-1]) if self.S_norm.size else 0.0,
            "notes": self.notes,
        }


def running_s_norm(times: np.ndarray, l4: np.ndarray) -> np.ndarray:
    """(int_0^t ||u(s)||_{L^4}^8 ds)^{1/8} by the trapezoid rule"""
    if times.size == 0:
        return np.zeros(0)
    return cumulative_trapezoid(l4 ** 8, times, initial=0.0) ** 0.125


def decay_fit(times: np.ndarray, l4: np.ndarray, t_wrap: float = np.inf, min_points: int = 4):
    """Least-squares slope of log ||u||_{L^4} against log t over the last half of the pre-wrap window.

    Returns (exponent, window, strictly_decreasing) or None when the window is too short.
    """
    usable = np.nonzero((times > 0) & (times <= t_wrap))[0]
    tail = usable[usable.size // 2:]
    if tail.size < min_points or np.any(l4[tail] <= 0):
        return None
    slope, _ = np.polyfit(np.log(times[tail]), np.log(l4[tail]), 1)
    decreasing = bool(np.all(np.diff(l4[tail]) < 0))
    return float(slope), (float(times[tail[0]]), float(times[tail[-1]])), decreasing


def metrics_from_norms(times: Sequence[float], l4: Sequence[float], t_wrap: float = np.inf,
                       min_points: int = 4) -> ScatteringReport:
    times = np.asarray(times, dtype=float)
    l4 = np.asarray(l4, dtype=float)
    report = ScatteringReport(times=times, L4=l4, S_norm=running_s_norm(times, l4), t_wrap=t_wrap)
    if times.size and times[-1] > t_wrap:
        report.notes.append(f"snapshots beyond the wrap-around time {t_wrap:.3f} are excluded from the fit")
    fit = decay_fit(times, l4, t_wrap, min_points)
    if fit is None:
        report.notes.append(f"decay fit unavailable: fewer than {min_points} usable tail snapshots")
    else:
        report.exponent, report.fit_window, report.tail_monotone = fit
    return report


def scattering_metrics(traj: Sequence[FieldState], g=None, fraction: float = 0.99,
                       min_points: int = 4) -> ScatteringReport:
    """L^4 norms, truncated S-norm and tail decay fit for a trajectory.

    Free-like dispersion gives exponents near -3/4; the call on scattering is
    left to the reader.
    """
    if not traj:
        raise ArgumentError("empty trajectory")
    t_wrap = wrap_time(traj[0], fraction)
    times = [u.t for u in traj]
    norms = [l4_norm(u) for u in traj]
    logger.debug("scattering metrics over %d snapshots, t_wrap=%.3f", len(norms), t_wrap)
    return metrics_from_norms(times, norms, t_wrap, min_points)


def centroid(u: FieldState) -> np.ndarray:
    """Mass-weighted circular mean position on the torus"""
    density = u.density()
    mass = float(density.sum())
    if mass <= 0:
        raise ArgumentError(f"centroid of a zero-mass field at t={u.t}")
    L = u.grid.box_length
    position = np.empty(3)
    for a, x in enumerate(u.grid.coordinates):
        mean = np.sum(density * np.exp(2j * np.pi * x / L)) / mass
        position[a] = L * np.angle(mean) / (2.0 * np.pi)
    return position


def centroid_track(traj: Sequence[FieldState]) -> np.ndarray:
    """Centroid y(t) for every snapshot, shape (T, 3)"""
    return np.array([centroid(u) for u in traj]).reshape(len(traj), 3)
