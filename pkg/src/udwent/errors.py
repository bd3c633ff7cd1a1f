"""Exception hierarchy shared across the package."""

from __future__ import annotations


class UdwError(Exception):
    """Base class for all package errors."""


class DomainError(UdwError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class GuardError(UdwError, ValueError):
    """Physical parameter guard violated (e.g. L < 10 sigma, 2 pi T sigma > 0.1)."""


class SingularityError(UdwError, ArithmeticError):
    """Evaluation too close to a pole.

    ``pole`` carries whatever identifies the pole: an integer image index,
    a ``(sign, k)`` pair, or a short description.
    """

    def __init__(self, message: str, pole=None):
        super().__init__(message)
        self.pole = pole


class AccuracyError(UdwError, ArithmeticError):
    """Adaptive quadrature exhausted its panel budget."""

    def __init__(self, message: str, value=None, error=None):
        super().__init__(message)
        self.value = value
        self.error = error


class AsymptoticBreakdownError(UdwError, ArithmeticError):
    """Truncated asymptotic series no longer trustworthy at these parameters."""

    def __init__(self, message: str, value=None, error=None):
        super().__init__(message)
        self.value = value
        self.error = error


class DegenerateExpansionError(UdwError, ZeroDivisionError):
    """Reciprocal of a series whose constant term vanishes."""


class PoleCrossingError(UdwError, ArithmeticError):
    """A contour shift would sweep over a pole with non-negligible residue."""


class IndeterminateError(UdwError, ArithmeticError):
    """Entanglement margin smaller than the combined error estimate."""

    def __init__(self, message: str, margin=None, tolerance=None):
        super().__init__(message)
        self.margin = margin
        self.tolerance = tolerance


class TopologyError(UdwError, RuntimeError):
    """Frequency scan found more sign changes than the model allows."""

    def __init__(self, message: str, brackets=None):
        super().__init__(message)
        self.brackets = brackets


class ConfigError(UdwError, ValueError):
    """Malformed or inconsistent run configuration."""
