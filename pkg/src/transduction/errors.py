class DomainError(ValueError):
    """Input outside the domain where an operation is defined."""


class ConsistencyError(RuntimeError):
    """An internal cross-check failed (e.g. an unphysical intermediate result)."""
