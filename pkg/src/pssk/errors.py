"""Exception hierarchy shared by all modules."""


class PsskError(ValueError):
    """Base class for data errors raised by this package."""


class MalformedLine(PsskError):
    pass


class DeathBeforeBirth(PsskError):
    pass


class NonFinite(PsskError):
    pass


class DimensionMismatch(PsskError):
    pass


class EmptyInput(PsskError):
    pass


class BadIndex(PsskError):
    pass


class DegenerateTriangle(PsskError):
    pass


class InvalidComplex(PsskError):
    pass


class NonPositiveScale(PsskError):
    pass


class OutsideDomain(PsskError):
    pass


class BadGrid(PsskError):
    pass


class TooLarge(PsskError):
    pass


class BadExponent(PsskError):
    pass


class NotSymmetric(PsskError):
    pass


class NoConvergence(PsskError):
    pass


class SearchExhausted(PsskError):
    pass


class SingleClass(PsskError):
    pass


class TooFewItems(PsskError):
    pass


class BadMatrix(PsskError):
    pass


class NotPSDWarning(UserWarning):
    """Emitted when a Gram matrix is shifted to make it positive semidefinite."""
