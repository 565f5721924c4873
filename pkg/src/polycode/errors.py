"""Exception types shared across the package."""


class PolycodeError(Exception):
    """Base class for all package errors."""


class ParameterError(PolycodeError, ValueError):
    """Invalid argument or shape mismatch."""


class AdversaryBudgetError(PolycodeError):
    """Raised when observed corruption is only explainable by more than T
    altered packets (e.g. no strict majority on a norm/inner-product entry)."""


class SerializationError(PolycodeError):
    """A value does not fit the fixed symbol width of the wire format."""


class ConstructionError(PolycodeError):
    """A deterministic construction could not be completed (e.g. the
    coefficient range q is too small for a fully nonsingular matrix)."""


class ProtocolViolationError(PolycodeError):
    """A storage-protocol guarantee failed at runtime: either the adversary
    budget was breached or a coefficient draw was degenerate."""


class DecodeError(PolycodeError):
    """Exact linear solve at the data collector failed (rank deficiency or
    inconsistent system)."""
