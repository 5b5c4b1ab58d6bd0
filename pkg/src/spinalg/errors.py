class DomainError(ValueError):
    """An argument lies outside the domain of the requested quantity."""


class ConsistencyError(RuntimeError):
    """An internal numerical cross-check failed."""
