"""Geometric and division algebras with hidden-variable correlation models."""

__version__ = "0.1.0"

from parsphere.errors import ConsistencyError, DomainError

__all__ = ["ConsistencyError", "DomainError", "__version__"]
