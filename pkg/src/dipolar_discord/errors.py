"""Exception types raised by the library."""


class InvalidStateError(ValueError):
    """Density-matrix elements violate normalization or positivity."""


class DomainError(ValueError):
    """A logarithm or square root received an argument outside its domain."""


class NoBracketError(RuntimeError):
    """A root search found no sign change in the scanned interval."""


class UndefinedAtFieldError(ValueError):
    """The quantity is only defined for zero external field."""
