# variational/classifier.py
from dataclasses import dataclass
from enum import Enum

from errors import ArgumentError
from polynomial import GaugePolynomial
from solver.grid import FieldState
from .functionals import FunctionalRecord, functionals
from .ground_state import Thresholds


class DichotomyVerdict(str, Enum):
    SCATTER = "ScatterRegion"
    BLOWUP = "BlowupRegion"
    ABOVE_THRESHOLD = "AboveThreshold"
    BOUNDARY = "Boundary"


@dataclass(frozen=True)
class Classification:
    """Verdict plus the quantities it was decided on"""
    verdict: DichotomyVerdict
    record: FunctionalRecord
    thresholds: Thresholds
    delta: float
    below_mass_gradient: bool
    kinetic_below: bool
    kinetic_above: bool

    @property
    def mass_energy(self) -> float:
        return self.record.mass_energy

    @property
    def K(self) -> float:
        return self.record.K

    def as_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "mass_energy": self.mass_energy,
            "me_threshold": self.thresholds.me_threshold,
            "K": self.K,
            "H": self.record.H,
            "delta": self.delta,
            "condition2": self.below_mass_gradient,
            "case1_HM_below": self.kinetic_below,
            "case2_HM_above": self.kinetic_above,
        }


def classify_record(record: FunctionalRecord, limits: Thresholds, tol: float = 1e-3) -> Classification:
    """Place (M E, K) relative to the ground-state threshold"""
    me = record.mass_energy
    ratio = me / limits.me_threshold
    if abs(ratio - 1.0) <= tol:
        verdict = DichotomyVerdict.BOUNDARY
    elif ratio > 1.0:
        verdict = DichotomyVerdict.ABOVE_THRESHOLD
    elif record.K > tol * record.H:
        verdict = DichotomyVerdict.SCATTER
    elif record.K < -tol * record.H:
        verdict = DichotomyVerdict.BLOWUP
    else:
        verdict = DichotomyVerdict.BOUNDARY

    hm = record.mass_kinetic
    return Classification(
        verdict=verdict,
        record=record,
        thresholds=limits,
        delta=1.0 - ratio,
        below_mass_gradient=record.norm_product < limits.mg_threshold,
        kinetic_below=hm < ratio * limits.hm_threshold,
        kinetic_above=hm > limits.hm_threshold,
    )


def classify(u0: FieldState, g: GaugePolynomial, limits: Thresholds, tol: float = 1e-3) -> Classification:
    """Scatter / blowup / above-threshold verdict for initial data"""
    if not u0.data.any():
        raise ArgumentError("cannot classify the zero field")
    return classify_record(functionals(u0, g), limits, tol)
