"""Exception hierarchy shared by all modules."""


class PeriodicZetaError(Exception):
    """Base class for every error raised by this package."""


class SpecMismatchError(PeriodicZetaError, ValueError):
    """Operands live over different groups."""


class GraphFormatError(PeriodicZetaError, ValueError):
    """A graph file or element string could not be parsed."""


class ValidationError(PeriodicZetaError):
    """A voltage graph violates the standing hypotheses."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class StabilizerViolationError(PeriodicZetaError):
    """A closed walk lifts to a cycle with non-trivial stabilizer."""

    def __init__(self, message, witness=None, block_voltage=None):
        super().__init__(message)
        self.witness = witness
        self.block_voltage = block_voltage


class IntegralityError(PeriodicZetaError, ArithmeticError):
    """A cycle count recovered from a series is not a non-negative integer."""


class DomainError(PeriodicZetaError, ValueError):
    """A numeric evaluation point is outside the supported region."""


class UnsupportedPointError(DomainError):
    pass


class ConvergenceError(PeriodicZetaError, ArithmeticError):
    """Quadrature or series truncation failed to reach the tolerance."""


class QMismatchError(PeriodicZetaError, ValueError):
    """Two graphs with different regularity were compared."""
