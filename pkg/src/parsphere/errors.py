class DomainError(ValueError):
    """Input outside the domain of an operation (bad vector, probability, angle...)."""


class ConsistencyError(RuntimeError):
    """An evaluated quantity disagrees with what the algebra guarantees."""
