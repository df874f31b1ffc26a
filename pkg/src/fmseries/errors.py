"""Exception hierarchy shared across the package."""


class FmseriesError(Exception):
    """Base class for all errors raised by fmseries."""


class UsageError(FmseriesError, ValueError):
    """Malformed call: wrong arity, dimension, literal syntax or field mix."""


class DimensionError(UsageError):
    pass


class FieldMismatchError(UsageError, TypeError):
    pass


class ParseError(UsageError):
    pass


class DomainError(FmseriesError, ArithmeticError):
    """A point or value lies outside the domain of the requested operation."""


class NonInvertibleDerivativeError(DomainError):
    pass


class BasePointError(DomainError):
    pass


class PrecisionError(DomainError):
    """Not enough p-adic digits to honour the request."""


class MinSmoothnessError(FmseriesError):
    """Symmetry-dependent computation refused by the smoothness policy."""
