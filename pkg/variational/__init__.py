# variational/__init__.py
"""Scalar ground state, sphere maximization, functionals, thresholds and classification"""

from .classifier import Classification, DichotomyVerdict, classify, classify_record
from .functionals import FunctionalRecord, functionals
from .ground_state import (
    GroundStateSpec,
    Thresholds,
    build_ground_state,
    refine_ground_state,
    thresholds,
)
from .profile import RadialProfile, RenormalizedProfile, solve_scalar_Q, solve_scalar_Q_renormalized
from .sphere import SphereMaximum, ascend_on_sphere, maximize_g_on_sphere, stationarity_residual

__all__ = [
    'Classification',
    'DichotomyVerdict',
    'classify',
    'classify_record',
    'FunctionalRecord',
    'functionals',
    'GroundStateSpec',
    'Thresholds',
    'build_ground_state',
    'refine_ground_state',
    'thresholds',
    'RadialProfile',
    'RenormalizedProfile',
    'solve_scalar_Q',
    'solve_scalar_Q_renormalized',
    'SphereMaximum',
    'ascend_on_sphere',
    'maximize_g_on_sphere',
    'stationarity_residual',
]
