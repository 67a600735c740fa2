"""Exception types raised across the package."""


class ECSError(Exception):
    """Base class for all package errors."""


class TruncationError(ECSError):
    """Fock-space truncation too small for the requested state."""


class PhaseError(ECSError):
    """Stationary wave function requested with a nonzero phase."""


class OrderError(ECSError):
    """Excitation order not supported by the requested closed form."""


class DomainError(ECSError):
    """Variance expression is not positive; moment constants are inconsistent."""


class ConvergenceError(ECSError):
    """A series or quadrature did not reach the requested tolerance."""


class ConstantsError(ECSError):
    """Closed-form moment constants disagree with the Fock-space oracle."""
