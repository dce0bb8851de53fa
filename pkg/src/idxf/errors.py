"""Exception hierarchy shared by every idxf module."""


class IdxfError(Exception):
    """Base class for all library errors."""


class DomainError(IdxfError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class PoleError(DomainError):
    """Evaluation at a pole of the gamma function."""


class RangeError(IdxfError, ValueError):
    """Argument outside the validated evaluation range."""


class TuningError(DomainError):
    """Physical configuration violates the tuning condition 8 g w^2 = m c^4."""


class NumericalError(IdxfError, ArithmeticError):
    """Base class for numerical-infrastructure failures."""


class NoConvergence(NumericalError):
    """A series did not meet its stopping criterion within the term cap."""


class DenominatorPole(NumericalError):
    """A denominator Pochhammer symbol vanished before the series terminated."""


class QuadratureFailure(NumericalError):
    """Quadrature refinement did not reach the requested tolerance."""


class EnvelopeError(NumericalError):
    """An integrand exceeded its declared decay envelope at a node."""
