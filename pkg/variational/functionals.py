# variational/functionals.py
from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from errors import DataError
from polynomial import GaugePolynomial
from solver.grid import FieldState


@dataclass(frozen=True)
class FunctionalRecord:
    """Mass, kinetic, potential, energy, virial, action and momentum of one field"""
    M: float
    H: float
    G: float
    omega: float = 0.0
    P: np.ndarray = field(default_factory=lambda: np.zeros(3))
    t: float = 0.0

    @property
    def E(self) -> float:
        return self.H - self.G

    @property
    def K(self) -> float:
        return 2.0 * self.H - 3.0 * self.G

    @property
    def S_omega(self) -> float:
        return self.E + self.omega * self.M

    @property
    def mass_energy(self) -> float:
        return self.M * self.E

    @property
    def mass_kinetic(self) -> float:
        return self.M * self.H

    @property
    def norm_product(self) -> float:
        """||u||_{(L^2)^N} ||grad u||_{(L^2)^N} = 2 sqrt(M H)"""
        return 2.0 * float(np.sqrt(max(self.M * self.H, 0.0)))

    def as_dict(self) -> Dict[str, float]:
        return {
            "t": self.t,
            "M": self.M,
            "H": self.H,
            "G": self.G,
            "E": self.E,
            "K": self.K,
            "S_omega": self.S_omega,
            "omega": self.omega,
            "Px": float(self.P[0]),
            "Py": float(self.P[1]),
            "Pz": float(self.P[2]),
        }


def functionals(u: FieldState, g: GaugePolynomial, omega: float = 0.0) -> FunctionalRecord:
    """All conserved and variational functionals by grid quadrature.

    H and P are evaluated as Fourier sums, which equal the grid sums of the
    spectral gradient by Parseval.
    """
    if not u.is_finite():
        raise DataError(f"field at t={u.t} contains non-finite values")
    grid = u.grid
    spectral_weight = grid.cell_volume / grid.n ** 3

    density = u.density()
    mass = 0.5 * grid.integrate(density)

    power = np.sum(np.abs(u.spectrum()) ** 2, axis=0)
    kinetic = 0.5 * float(np.sum(grid.k_squared * power)) * spectral_weight
    momentum = np.array([float(np.sum(k * power)) * spectral_weight for k in grid.wavenumbers])

    potential = 0.25 * grid.integrate(g.evaluate(u.data)) if not g.is_zero() else 0.0
    return FunctionalRecord(M=mass, H=kinetic, G=potential, omega=omega, P=momentum, t=u.t)
