# __init__.py
"""
gNLS Lab

Numerical laboratory for N-coupled focusing cubic NLS systems on the 3D torus:
ground states, sharp thresholds, split-step evolution and virial, boost and
scattering diagnostics.
"""

from core import GNLSLab
from config import LabConfig, get_config

__version__ = "1.0.0"

__all__ = [
    'GNLSLab',
    'LabConfig',
    'get_config',
]
