"""
Exception hierarchy for sparsefactor.

Every error carries the process exit code the CLI reports for it.
"""

from typing import Any, Optional


class SparseFactorError(Exception):
    """Base exception for sparsefactor errors."""
    exit_code = 1


class ConfigurationError(SparseFactorError):
    """Raised when there's an issue with configuration."""
    exit_code = 2


class InputError(SparseFactorError):
    """Raised when an input file cannot be read or does not hold a square matrix."""
    exit_code = 2


class InvalidDimensionError(SparseFactorError):
    """Raised on bad sizes, shapes, ranks or indices."""
    exit_code = 2


class NumericFaultError(SparseFactorError):
    """Raised when a loss or a value becomes NaN or infinite.

    ``last_valid`` holds the most recent finite state (a factor chain or a
    model restored to its last checkpoint) when the caller had one.
    """
    exit_code = 3

    def __init__(self, message: str, last_valid: Optional[Any] = None):
        super().__init__(message)
        self.last_valid = last_valid


class LengthMismatchError(SparseFactorError):
    """Raised when sequence lengths differ from each other or from the pattern size."""
    exit_code = 4
