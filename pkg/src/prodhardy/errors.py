"""Package-level exception types."""

__all__ = ["ProdHardyError", "IdentityError"]


class ProdHardyError(Exception):
    """Base class for package errors."""


class IdentityError(ProdHardyError):
    """A numerical identity that must hold failed its tolerance.

    Raised by operations whose contract asserts an identity (Parseval-type
    oscillation identities, witness lower bounds, block majorants).  The
    message carries the counterexample data.
    """
