"""Exception types shared by all modules."""


class UltrafriableError(Exception):
    """Base class for errors raised by this package."""


class DomainError(UltrafriableError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class ResourceError(UltrafriableError, ValueError):
    """The request would exceed a configured memory or runtime budget."""


class PreconditionError(UltrafriableError, ValueError):
    """A stated precondition (e.g. P+(q) <= y) does not hold."""


class RegimeError(DomainError):
    """The (x, y) pair is outside the regime required by the operation.

    For the saddle equation this carries the limiting value of the defining
    sum at 0+ so callers can see how far out of range the target is, and a
    hint that the divisor-symmetry identity covers the complementary range.
    """

    def __init__(self, message: str, phi1_limit: float | None = None):
        super().__init__(message)
        self.phi1_limit = phi1_limit


class NonCoprimeError(DomainError):
    """Residue class shares a factor with the modulus; see the non-coprime estimator."""


class UnsupportedCaseError(UltrafriableError, ValueError):
    """A non-coprime configuration outside the supported (squarefree, split) case."""
