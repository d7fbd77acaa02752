"""Exception types shared across the package."""


class NetgofError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(NetgofError, ValueError):
    """An argument is outside its documented domain."""


class ParseError(NetgofError, ValueError):
    """An edge-list document could not be parsed.

    Carries the 1-based line number when the failure is tied to a line.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CalibrationError(NetgofError, ValueError):
    """A two-colour model cannot be calibrated to the requested targets."""


class EnumerationGuardError(NetgofError, ValueError):
    """An exact enumeration was refused because it is combinatorially too large."""
