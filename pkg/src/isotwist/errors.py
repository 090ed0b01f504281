"""Exception types shared across the package."""


class IsotwistError(Exception):
    """Base class for all errors raised by isotwist."""


class DomainError(IsotwistError, ValueError):
    """Operands live in different fields, or an input is outside an operation's domain."""


class PreconditionError(IsotwistError, ValueError):
    """A mathematical hypothesis required by an operation does not hold."""


class VerificationError(IsotwistError):
    """A certificate or identity check failed."""
