"""Exception hierarchy shared by all modules."""


class RiskSpectrumError(Exception):
    """Base class for every error raised by this package."""


class InputError(RiskSpectrumError, ValueError):
    """Malformed distribution data or arguments."""


class DomainError(RiskSpectrumError, ValueError):
    """Arguments outside the mathematical domain of an operation."""


class InvalidRegion(DomainError):
    """Threshold lies at or above the top of the support."""


class NegativeSupport(DomainError):
    """Operation requires a nonnegative random variable."""


class NumericOverflow(RiskSpectrumError, ArithmeticError):
    """Result is not representable as a finite float."""


class ToleranceNotReached(RiskSpectrumError, ArithmeticError):
    """An iterative method hit its iteration cap before the tolerance."""


class QuadratureNonConvergent(ToleranceNotReached):
    """Adaptive quadrature could not reach the requested tolerance."""
