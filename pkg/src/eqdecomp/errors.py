"""Exception types shared across the package."""


class GeometryError(ValueError):
    """Base class for all errors raised by this package."""


class InvalidInputError(GeometryError):
    """An argument is outside the operation's domain."""


class InvalidParameterError(InvalidInputError):
    """A construction parameter violates its invariants."""


class AmbientMismatchError(InvalidInputError):
    """A point and a curve piece live in different ambient spaces."""
