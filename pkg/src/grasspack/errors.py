"""Exception types shared across the package."""


class GrasspackError(Exception):
    """Base class for all package-specific failures."""


class InvalidInput(GrasspackError):
    """An argument violates a documented precondition."""


class RankDeficient(GrasspackError):
    """A matrix expected to have full column rank does not."""


class NotPSD(GrasspackError):
    """A matrix expected to be positive semidefinite is indefinite."""


class RankExceeded(GrasspackError):
    """A Gram matrix has numerical rank above the ambient dimension."""


class NumericalFailure(GrasspackError):
    """An inner iterative solve did not converge to its tolerance."""


class SingularBlock(GrasspackError):
    """A diagonal block is numerically singular and cannot be normalized."""


class InitFailure(GrasspackError):
    """The rejection sampler exhausted its draw budget.

    Carries ``accepted``, the number of subspaces placed before giving up.
    """

    def __init__(self, message: str, accepted: int = 0):
        super().__init__(message)
        self.accepted = accepted


class ParseError(GrasspackError):
    """An input file could not be interpreted."""
