"""Exception types shared across the package."""


class SymRestoreError(Exception):
    """Base class for all package errors."""


class DomainError(SymRestoreError, ValueError):
    """An argument lies outside the domain of an operation."""


class ResourceLimitError(SymRestoreError):
    """The requested register is too large for dense simulation."""


class EmptySectorError(SymRestoreError):
    """The target symmetry sector has zero weight in the input state."""

    def __init__(self, message: str = "good component absent"):
        super().__init__(message)
