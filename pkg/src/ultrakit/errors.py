"""Exception hierarchy shared by every module."""


class UltrakitError(Exception):
    """Base class for all library errors."""


class InputError(UltrakitError, ValueError):
    """Malformed or out-of-domain input (bad prime, asymmetric matrix, ...)."""


class RepresentationError(UltrakitError, ArithmeticError):
    """A result exists mathematically but has no exact representation here."""


class PreconditionError(UltrakitError):
    """An operation was called on data violating its stated precondition."""


class ResourceError(UltrakitError):
    """A configured size bound would be exceeded."""
