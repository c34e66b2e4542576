"""Exception types shared across the package."""


class GbaError(Exception):
    """Base class for all errors raised by gbaction."""


class DomainError(GbaError, ValueError):
    """An argument lies outside the domain of an operation."""


class UnsupportedError(GbaError):
    """The requested operation is not available for this realization."""


class BoundExceeded(GbaError):
    """An enumeration would exceed its configured size bound."""


class ConsistencyError(GbaError):
    """Two independent computations that must agree did not."""


class ParseError(GbaError, ValueError):
    """A fixture file could not be parsed."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
