"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input lies outside the mathematical domain of an operation."""


class UsageError(ValueError):
    """An operation was called with inconsistent or unsupported arguments."""
