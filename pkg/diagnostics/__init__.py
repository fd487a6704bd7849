# diagnostics/__init__.py
"""Virial, boost and scattering diagnostics along trajectories"""

from .boost import (
    BoostCovarianceReport,
    BoostParams,
    boost,
    boost_covariance_check,
    boost_energy_vertex,
    galilean_transform,
    zero_momentum_boost,
)
from .scattering import (
    ScatteringReport,
    centroid,
    centroid_track,
    l4_norm,
    scattering_metrics,
    wrap_time,
)
from .virial import CutoffProfile, VirialSeries, VirialWeight, virial_sample, virial_series, virial_weight
from .writer import CSV_COLUMNS, DiagnosticsCollector, read_diagnostics

__all__ = [
    'BoostCovarianceReport',
    'BoostParams',
    'boost',
    'boost_covariance_check',
    'boost_energy_vertex',
    'galilean_transform',
    'zero_momentum_boost',
    'ScatteringReport',
    'centroid',
    'centroid_track',
    'l4_norm',
    'scattering_metrics',
    'wrap_time',
    'CutoffProfile',
    'VirialSeries',
    'VirialWeight',
    'virial_sample',
    'virial_series',
    'virial_weight',
    'CSV_COLUMNS',
    'DiagnosticsCollector',
    'read_diagnostics',
]
