"""Exception types raised by the numerical routines."""


class BSGaussError(Exception):
    """Base class for all errors raised by :mod:`bsgauss`."""


class UnsupportedOrder(BSGaussError, ValueError):
    """Oscillator order beyond the range the recurrence is validated for."""


class QuadratureUnderresolved(BSGaussError, ValueError):
    """A quadrature rule is too small to integrate a product exactly."""


class InvalidSpectralParameter(BSGaussError, ValueError):
    """Energy at or above the bottom of the free spectrum (E >= 1/2)."""


class DiagonalSingularity(BSGaussError, ArithmeticError):
    """Green kernel requested too close to its logarithmic diagonal singularity."""


class NumericalFailure(BSGaussError, RuntimeError):
    """Base for failures of an iterative numerical method."""


class EigensolverFailure(NumericalFailure):
    pass


class BracketFailure(NumericalFailure):
    pass


class NoBoundState(NumericalFailure):
    """The requested eigenvalue branch never reaches the coupling threshold."""
