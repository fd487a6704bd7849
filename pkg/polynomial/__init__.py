# polynomial/__init__.py
"""Gauge-invariant quartic nonlinearities and their identity checks"""

from .gauge_polynomial import (
    ComplexVector,
    GaugePolynomial,
    MultiIndexPair,
    eval_F,
    eval_g,
    eval_grad_g_spatial_factor,
)
from .identities import (
    IdentityReport,
    check_charge_identity,
    check_euler_identity,
    check_gauge_invariance,
    check_identities,
    check_wirtinger,
)
from .presets import get_preset, load_polynomial_file, manakov, spinor

__all__ = [
    'ComplexVector',
    'GaugePolynomial',
    'MultiIndexPair',
    'eval_F',
    'eval_g',
    'eval_grad_g_spatial_factor',
    'IdentityReport',
    'check_charge_identity',
    'check_euler_identity',
    'check_gauge_invariance',
    'check_identities',
    'check_wirtinger',
    'get_preset',
    'load_polynomial_file',
    'manakov',
    'spinor',
]
