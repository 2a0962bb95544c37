"""Exception and warning types shared across the package."""


class QuenchError(Exception):
    """Base class for errors raised by :mod:`harmonic_quench`."""


class InvalidSpecError(QuenchError, ValueError):
    """Chain parameters violate a precondition."""


class CouplingTooStrongError(InvalidSpecError):
    """Position-momentum coupling exceeds the stability bound ``g0 < 2*omega``."""


class NumericalError(QuenchError, ArithmeticError):
    """A numerical procedure failed (as opposed to receiving bad input)."""


class ContinuationError(NumericalError):
    """Analytic continuation of a square root along a path hit a zero."""


class OptimizerError(NumericalError):
    """Minimisation did not converge; ``best`` carries the best value found."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class DimensionGuardError(InvalidSpecError):
    """Requested truncated-Fock space is too large for dense linear algebra."""


class TruncationWarning(UserWarning):
    """Thermal population beyond the Fock cutoff is not negligible."""


class DegeneracyWarning(UserWarning):
    """Degenerate eigenvalues were ordered with the tie-break rule."""
