"""Exception hierarchy shared across the toolkit."""

from __future__ import annotations


class BiblioRankError(Exception):
    """Base class for all toolkit errors."""


class InputError(BiblioRankError):
    """Malformed or invariant-violating input data.

    ``line`` carries the 1-based line number of the offending row when known.
    """

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ConfigError(BiblioRankError):
    """Invalid run configuration (bad paths, enum values, windows)."""


class QuartileLookupError(BiblioRankError):
    """A journal has no quartile for a requested (category, year)."""


class InsufficientDataError(BiblioRankError):
    """Too few paired observations to report a correlation."""


class ConstantInputError(BiblioRankError):
    """Correlation is undefined because one input has no variation."""
