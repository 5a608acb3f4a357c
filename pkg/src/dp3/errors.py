"""Exception hierarchy shared by every dp3 module."""


class DP3Error(Exception):
    """Base class for all errors raised by dp3."""


class InputShapeError(DP3Error, ValueError):
    """Array length does not match the grid."""


class NumericError(DP3Error, ArithmeticError):
    """A non-finite value appeared in an input or intermediate quantity."""


class DomainError(DP3Error, ValueError):
    """An argument lies outside the domain of the operation."""


class ConsistencyError(DP3Error, ValueError):
    """Two representations of the same state disagree."""


class HypothesisError(DP3Error, ValueError):
    """Initial data violate a hypothesis required by a certificate."""


class ThresholdError(DomainError):
    """The initial slope does not lie below the Riccati blow-up threshold."""

    def __init__(self, message, threshold):
        super().__init__(message)
        self.threshold = threshold


class ConfigError(DP3Error, ValueError):
    """Configuration document failed validation."""


class DecayWarning(UserWarning):
    """Field is not negligible at the edge of the periodic box."""
