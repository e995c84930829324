"""Exception types raised by the library and mapped to CLI exit codes."""


class AitLabError(Exception):
    """Base class for all library errors."""


class PoleError(ArithmeticError, AitLabError):
    """Argument sits on a pole of the gamma function."""


class AccuracyError(ArithmeticError, AitLabError):
    """Point lies outside the validated accuracy envelope of a special function."""


class SpecError(ValueError, AitLabError):
    """Invalid worldline, window or state description."""


class UnsupportedWorldline(AitLabError):
    """The requested evaluation path does not handle this worldline variant."""


class ConvergenceError(ArithmeticError, AitLabError):
    """Adaptive quadrature could not meet its tolerance within budget."""


class DegenerateError(ArithmeticError, AitLabError):
    """Quantity undefined for the given input (vanishing denominator, resonant tail)."""


class NoDipError(AitLabError):
    """Scan minimum sits on the boundary of the search range."""


class PositivityError(ArithmeticError, AitLabError):
    """Evolved state left the physical cone beyond float noise."""


class ShapeError(ValueError, AitLabError):
    """Matrix input has the wrong shape or symmetry."""


class ConfigError(ValueError, AitLabError):
    """Run configuration failed validation."""

    def __init__(self, key: str, reason: str):
        self.key = key
        self.reason = reason
        super().__init__(f"{key}: {reason}")
