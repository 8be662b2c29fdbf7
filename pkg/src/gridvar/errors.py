"""Exception types shared across the package."""


class GridvarError(ValueError):
    """Base class for domain errors raised by this package."""


class GuardError(GridvarError):
    """Raised when a computation would exceed an enumeration guard.

    Covers exhaustive-enumeration size limits and method preconditions that
    bound work (e.g. the dyadic method on a grid whose cell count per axis is
    not a power of two). CLI maps this to exit code 3.
    """


class UnisolventError(GridvarError):
    """Raised when an interpolation point set cannot determine a polynomial."""


class LPError(GridvarError):
    """Raised when the linear-programming solver cannot certify a solution."""
