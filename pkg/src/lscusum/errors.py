"""Exception types raised across the package."""


class LsCusumError(Exception):
    """Base class for all errors raised by this package."""


class SeriesTooShort(LsCusumError):
    """Input series has too few observations for the requested operation."""


class ShapeMismatch(LsCusumError):
    """Array dimensions do not match the expected layout."""


class DomainGuardViolation(LsCusumError):
    """A moment vector left the admissible domain of the parameter function.

    The 1-based index of the first offending summand is attached when the
    violation occurs along an estimation pass.
    """

    def __init__(self, message, index=None):
        if index is not None:
            message = f"{message} (first offending index t={index})"
        super().__init__(message)
        self.index = index


class InvalidBandwidth(LsCusumError):
    """Smoothing bandwidth outside 1..m."""


class InvalidShape(LsCusumError):
    """Nonpositive Gamma shape parameter."""


class UnstableCoefficient(LsCusumError):
    """Autoregressive coefficient (function) violates the stability region."""


class ConfigInfeasible(LsCusumError):
    """Estimator configuration leaves no summation range."""


class InvalidLevel(LsCusumError):
    """Quantile level outside (0, 1)."""


class InvalidOffset(LsCusumError):
    """CUSUM start fraction u_n outside [0, 1)."""


class NonPositivePrice(LsCusumError):
    """Price series contains an entry <= 0; log returns undefined."""

    def __init__(self, message, index=None):
        if index is not None:
            message = f"{message} (index {index})"
        super().__init__(message)
        self.index = index


class InvalidGamma(LsCusumError):
    """Nonpositive scale for the bounded-increment transform."""


class ParseError(LsCusumError):
    """Malformed CSV content; carries the 1-based line number."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"{message} (line {line})"
        super().__init__(message)
        self.line = line


class SchemaMismatch(LsCusumError):
    """CSV file lacks the expected header/columns or is empty."""
