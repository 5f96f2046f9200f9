"""Numerical laboratory for mesoscopic linear statistics of Riemann zeta zeros."""

__version__ = "0.1.0"

from .errors import (
    CoverageError,
    DomainError,
    ResourceError,
    SingularityError,
    UnboundedVariationError,
)

__all__ = [
    "CoverageError",
    "DomainError",
    "ResourceError",
    "SingularityError",
    "UnboundedVariationError",
    "__version__",
]
