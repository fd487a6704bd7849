# errors.py
"""Exception hierarchy shared by every lab package.

Each leaf carries the CLI exit code it maps to; library code only raises,
the command layer converts.
"""
from typing import Optional


class GNLSError(Exception):
    """Base class for lab errors"""
    exit_code = 1


class UsageError(GNLSError, ValueError):
    exit_code = 1


class ValidationError(GNLSError, ValueError):
    """Invalid scenario, table or configuration value"""
    exit_code = 2

    def __init__(self, message: str, pointer: Optional[str] = None):
        self.pointer = pointer
        self.detail = message
        if pointer is not None:
            message = f"{pointer}: {message}"
        super().__init__(message)


class ConfigurationError(ValidationError):
    pass


class PolynomialError(ValidationError):
    pass


class ArgumentError(GNLSError, ValueError):
    exit_code = 2


class NumericalError(GNLSError, ArithmeticError):
    exit_code = 3


class NonfocusingError(NumericalError):
    """Raised when g_max <= 0, so no ground state exists"""


class ShootingError(NumericalError):
    pass


class ResolutionError(NumericalError):
    pass


class OptimizerError(NumericalError):
    pass


class TruncationError(NumericalError):
    """Field does not decay to the required level inside the box"""


class OverflowGuardError(NumericalError):
    pass


class CheckpointError(GNLSError, OSError):
    exit_code = 4


class DataError(NumericalError):
    """Non-finite field values"""
