# cli/__init__.py
"""Scenario files and the gnls command line.

The command module imports core, which imports the scenario layer from here;
import cli.commands directly.
"""

from .scenario import (
    DiagnosticsSpec,
    GridSpec,
    InitialDataSpec,
    OutputSpec,
    PolynomialSpec,
    Scenario,
    echo_scenario,
    load_scenario,
    parse_scenario,
)

__all__ = [
    'DiagnosticsSpec',
    'GridSpec',
    'InitialDataSpec',
    'OutputSpec',
    'PolynomialSpec',
    'Scenario',
    'echo_scenario',
    'load_scenario',
    'parse_scenario',
]
