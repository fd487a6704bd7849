# diagnostics/virial.py
"""Truncated virial V_R(t) = int R^2 phi(x/R) sum_j |u_j|^2 and its time derivatives.

phi is radial: s^2 on [0, 1], s^2 (1 - S(s - 1)) on [1, 2] with the quintic
smoothstep S(t) = 6t^5 - 15t^4 + 10t^3, and 0 beyond 2. The completion is C^2,
so the fourth-order term of the remainder is integrated by parts once:
-int Delta^2 w rho = int grad(Delta w) . grad rho.
"""
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Sequence

import numpy as np
from numpy.polynomial import Polynomial

from errors import ArgumentError
from polynomial import GaugePolynomial
from solver.grid import FieldState, GridDescriptor
from variational.functionals import FunctionalRecord, functionals

_CONSTANT_SAMPLES = 20001


class CutoffProfile:
    """Piecewise-polynomial radial weight phi(s) and its derivatives"""

    def __init__(self):
        square = Polynomial([0.0, 0.0, 1.0])
        t = Polynomial([-1.0, 1.0])
        smoothstep = 10.0 * t ** 3 - 15.0 * t ** 4 + 6.0 * t ** 5
        blend = square * (1.0 - smoothstep)
        self._pieces = [[square.deriv(m) for m in range(4)], [blend.deriv(m) for m in range(4)]]

    def derivative(self, s, order: int = 0) -> np.ndarray:
        """d^order phi / ds^order for order in 0..3"""
        s = np.asarray(s, dtype=float)
        inner, blend = self._pieces[0][order], self._pieces[1][order]
        return np.where(s <= 1.0, inner(s), np.where(s < 2.0, blend(s), 0.0))

    def __call__(self, s) -> np.ndarray:
        return self.derivative(s, 0)

    def laplacian(self, s) -> np.ndarray:
        """Delta phi = phi'' + 2 phi'/s (equal to 6 on s <= 1)"""
        s = np.asarray(s, dtype=float)
        safe = np.maximum(s, 1.0)
        return np.where(s <= 1.0, 6.0, self.derivative(s, 2) + 2.0 * self.derivative(s, 1) / safe)

    def laplacian_slope(self, s) -> np.ndarray:
        """d/ds of Delta phi, supported on [1, 2]"""
        s = np.asarray(s, dtype=float)
        safe = np.maximum(s, 1.0)
        d1, d2, d3 = (self.derivative(s, m) for m in (1, 2, 3))
        return np.where(s <= 1.0, 0.0, d3 + 2.0 * d2 / safe - 2.0 * d1 / safe ** 2)

    def hessian_defect(self, s) -> np.ndarray:
        """Operator norm of D^2 phi - 2I: max(|phi'' - 2|, |phi'/s - 2|)"""
        s = np.asarray(s, dtype=float)
        safe = np.maximum(s, 1.0)
        radial = np.abs(self.derivative(s, 2) - 2.0)
        tangential = np.abs(self.derivative(s, 1) / safe - 2.0)
        return np.where(s <= 1.0, 0.0, np.maximum(radial, tangential))

    @cached_property
    def constants(self) -> Dict[str, float]:
        """Sup-norm bounds of the derivative combinations entering A_R"""
        s = np.linspace(1.0, 2.5, _CONSTANT_SAMPLES)
        return {
            "hessian": 4.0 * float(np.max(self.hessian_defect(s))),
            "laplacian_slope": float(np.max(np.abs(self.laplacian_slope(s)))),
            "laplacian": float(np.max(np.abs(self.laplacian(s) - 6.0))),
        }


CUTOFF = CutoffProfile()


@dataclass
class VirialWeight:
    """Grid samples of w = R^2 phi(x/R) and of the derivative fields A_R needs"""
    grid: GridDescriptor
    R: float

    def __post_init__(self):
        if not self.R > 0:
            raise ArgumentError(f"cutoff radius must be positive, got {self.R}")
        if 2.0 * self.R > 0.5 * self.grid.box_length:
            raise ArgumentError(
                f"cutoff support 2R={2.0 * self.R} exceeds half the box L/2={0.5 * self.grid.box_length}"
            )

    @cached_property
    def _radius(self) -> np.ndarray:
        return self.grid.radius_from((0.0, 0.0, 0.0))

    @cached_property
    def _unit(self):
        safe = np.where(self._radius > 0, self._radius, 1.0)
        return tuple(x / safe for x in self.grid.coordinates)

    @cached_property
    def values(self) -> np.ndarray:
        return self.R ** 2 * CUTOFF(self._radius / self.R)

    @cached_property
    def gradient(self):
        """grad w = R phi'(s) x/|x|"""
        slope = self.R * CUTOFF.derivative(self._radius / self.R, 1)
        return tuple(slope * e for e in self._unit)

    @cached_property
    def hessian_defect(self):
        """Upper triangle (k, l, D^2 w - 2I) in the annulus; zero inside |x| <= R"""
        s = self._radius / self.R
        outside = s > 1.0
        safe = np.maximum(s, 1.0)
        radial = CUTOFF.derivative(s, 2)
        tangential = CUTOFF.derivative(s, 1) / safe
        entries = []
        for k in range(3):
            for l in range(k, 3):
                proj = self._unit[k] * self._unit[l]
                value = radial * proj + tangential * ((k == l) - proj) - 2.0 * (k == l)
                entries.append((k, l, np.where(outside, value, 0.0)))
        return entries

    @cached_property
    def laplacian_defect(self) -> np.ndarray:
        """Delta w - 6"""
        return CUTOFF.laplacian(self._radius / self.R) - 6.0

    @cached_property
    def laplacian_gradient(self):
        """grad(Delta w) = R^{-1} (Delta phi)'(s) x/|x|"""
        slope = CUTOFF.laplacian_slope(self._radius / self.R) / self.R
        return tuple(slope * e for e in self._unit)

    @cached_property
    def exterior(self) -> np.ndarray:
        return self._radius >= self.R

    def bound_constant(self, g: GaugePolynomial) -> Dict[str, float]:
        c = dict(CUTOFF.constants)
        c["potential"] = c.pop("laplacian") * g.coefficient_bound()
        c["C"] = c["hessian"] + c["laplacian_slope"] + c["potential"]
        return c


def virial_weight(grid: GridDescriptor, R: float) -> np.ndarray:
    """R^2 phi(x/R) sampled on the grid"""
    return VirialWeight(grid, R).values


@dataclass(frozen=True)
class VirialSample:
    t: float
    V: float
    Vp: float
    K8: float
    A_R: float
    A_R_bound: float


def virial_sample(u: FieldState, g: GaugePolynomial, weight: VirialWeight,
                  record: FunctionalRecord = None) -> VirialSample:
    """V, analytic V', 8K and the remainder A_R (exact and bounded) for one state"""
    if u.grid.shape[1:] != weight.grid.shape[1:] or u.grid.box_length != weight.grid.box_length:
        raise ArgumentError("field and virial weight live on different grids")
    grid = u.grid
    record = record if record is not None else functionals(u, g)
    density = u.density()
    grad = u.gradient()  # (3, N, n, n, n)

    V = grid.integrate(weight.values * density)
    current = np.imag(np.sum(np.conj(u.data)[None] * grad, axis=1))  # sum_j Im(conj u_j grad u_j)
    Vp = 2.0 * grid.integrate(sum(w * c for w, c in zip(weight.gradient, current)))

    hessian_term = 0.0
    for k, l, defect in weight.hessian_defect:
        pair = np.real(np.sum(np.conj(grad[k]) * grad[l], axis=0))
        hessian_term += (1.0 if k == l else 2.0) * grid.integrate(defect * pair)
    density_grad = grid.gradient(density).real
    slope_term = grid.integrate(sum(w * d for w, d in zip(weight.laplacian_gradient, density_grad)))
    potential = 0.0 if g.is_zero() else grid.integrate(weight.laplacian_defect * g.evaluate(u.data))
    A_R = 4.0 * hessian_term + slope_term - potential

    exterior = weight.exterior
    gradient_density = np.sum(np.abs(grad) ** 2, axis=(0, 1))
    integrand = gradient_density + density / weight.R ** 2 + density ** 2
    A_R_bound = weight.bound_constant(g)["C"] * grid.integrate(np.where(exterior, integrand, 0.0))
    return VirialSample(t=u.t, V=V, Vp=Vp, K8=8.0 * record.K, A_R=A_R, A_R_bound=A_R_bound)


@dataclass
class VirialSeries:
    """Virial quantities along a trajectory"""
    times: np.ndarray
    V: np.ndarray
    Vp: np.ndarray
    K8: np.ndarray
    A_R: np.ndarray
    A_R_bound: np.ndarray
    R: float
    constants: Dict[str, float] = field(default_factory=dict)

    @classmethod
    def from_samples(cls, samples: Sequence[VirialSample], R: float, constants: Dict[str, float]) -> "VirialSeries":
        def column(name):
            return np.array([getattr(s, name) for s in samples], dtype=float)
        return cls(times=column("t"), V=column("V"), Vp=column("Vp"), K8=column("K8"), A_R=column("A_R"),
                   A_R_bound=column("A_R_bound"), R=R, constants=constants)

    @property
    def C(self) -> float:
        return self.constants.get("C", np.nan)

    @property
    def Vpp(self) -> np.ndarray:
        """Finite-difference V'' of the analytic V' (centered inside, one-sided at the ends)"""
        if self.times.size < 2:
            return np.full(self.times.shape, np.nan)
        return np.gradient(self.Vp, self.times, edge_order=1)

    @property
    def interior(self) -> np.ndarray:
        mask = np.ones(self.times.shape, dtype=bool)
        mask[[0, -1]] = False
        return mask

    def residual(self) -> np.ndarray:
        """|V'' - 8K - A_R| at interior snapshots"""
        return np.abs(self.Vpp - self.K8 - self.A_R)[self.interior]

    def bound_holds(self, slack: float = 1.0, tolerance: float = 0.0) -> bool:
        """|V'' - 8K| <= slack * A_R_bound + tolerance at every interior snapshot"""
        excess = np.abs(self.Vpp - self.K8) - slack * self.A_R_bound - tolerance
        return bool(np.all(excess[self.interior] <= 0.0))


def virial_series(traj: Sequence[FieldState], g: GaugePolynomial, R: float) -> VirialSeries:
    """Virial diagnostics for a stored trajectory sharing one grid"""
    if not traj:
        raise ArgumentError("empty trajectory")
    grid = traj[0].grid
    if any(u.grid != grid for u in traj):
        raise ArgumentError("trajectory snapshots live on different grids")
    weight = VirialWeight(grid, R)
    samples = [virial_sample(u, g, weight) for u in traj]
    return VirialSeries.from_samples(samples, R, weight.bound_constant(g))
