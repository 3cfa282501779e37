"""
Exception hierarchy for Witt Lattice Lab.
Every error raised by the services derives from WittLatticeError so callers
(CLI, HTTP routes) can map whole families to exit codes and status codes.
"""


class WittLatticeError(Exception):
    pass


# ===== Input validation (exit code 2) =====

class InputValidationError(WittLatticeError):
    pass


class NotPrime(InputValidationError):
    pass


class ContextMismatch(InputValidationError):
    pass


class AssociativityFailure(InputValidationError):
    pass


class IdentityFailure(InputValidationError):
    pass


class MultiplicativityFailure(InputValidationError):
    pass


class NotSubgroup(InputValidationError):
    pass


class NotStable(InputValidationError):
    pass


class NotUnit(WittLatticeError):
    pass


# ===== Precision (exit code 3) =====

class PrecisionExhausted(WittLatticeError):
    """Raised when a result cannot be certified at the working precision."""

    def __init__(self, message: str, precision: int | None = None):
        super().__init__(message)
        self.precision = precision


class StabilizationFailure(PrecisionExhausted):
    pass


# ===== Resource caps (exit code 4) =====

class CapExceeded(WittLatticeError):
    pass


class GroupTooLarge(CapExceeded):
    pass


class DimensionCapExceeded(CapExceeded):
    pass


class EnumerationCapExceeded(CapExceeded):
    pass


# ===== Warnings =====

class SeparabilityUnverified(UserWarning):
    """Trace form of the regular representation is not invertible at this precision."""
