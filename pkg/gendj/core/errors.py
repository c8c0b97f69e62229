"""
Errors Module - Exception taxonomy for gendj

Every failure raised by the library derives from GenDJError. The CLI maps
each family onto its own exit status.
"""

from typing import Any, Dict, Optional


class GenDJError(Exception):
    """Base class for all gendj errors"""

    exit_code: int = 1

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.details = details or {}


class PreconditionError(GenDJError, ValueError):
    """An operation was called outside its precondition"""

    exit_code = 2


class PromiseViolationError(GenDJError):
    """A function was observed to break the constant / evenly-distributed promise"""

    exit_code = 3


class FormatError(GenDJError, ValueError):
    """Malformed function table, auxiliary vector or experiment file"""

    exit_code = 4


class SimulationError(GenDJError, ArithmeticError):
    """A state vector left the unit sphere or stopped being finite"""

    exit_code = 1
