# solver/__init__.py
"""Periodic grid, split-step integrator and checkpoints.

The diagnostics-emitting run loop lives in solver.simulation, which depends
on the variational package and is imported from there directly.
"""

from .checkpoint import read_checkpoint, read_header, write_checkpoint
from .grid import FieldState, GridDescriptor
from .stepper import EvolutionConfig, evolve, linear_step, nonlinear_step, strang_step

__all__ = [
    'read_checkpoint',
    'read_header',
    'write_checkpoint',
    'FieldState',
    'GridDescriptor',
    'EvolutionConfig',
    'evolve',
    'linear_step',
    'nonlinear_step',
    'strang_step',
]
