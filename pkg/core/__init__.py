# core/__init__.py
"""Lab orchestration: scenario runs, resume and dichotomy sweeps"""

from .lab import GNLSLab, RunSummary, SweepResult, SweepRow

__all__ = ['GNLSLab', 'RunSummary', 'SweepResult', 'SweepRow']
