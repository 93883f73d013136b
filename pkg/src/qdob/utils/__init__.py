"""
QDOB Utilities Package

Error types, logging, runtime settings and tracing helpers.
"""

from .config import RuntimeSettings
from .errors import (
    AliasingConfigError,
    ArtifactIOError,
    ConfigValidationError,
    DomainError,
    InsufficientDataError,
    InternalInvariantError,
    InvalidArgumentError,
    NumericFaultError,
    PlanInfeasibleError,
    QdobError,
)

__all__ = [
    "QdobError",
    "InvalidArgumentError",
    "AliasingConfigError",
    "PlanInfeasibleError",
    "DomainError",
    "NumericFaultError",
    "InsufficientDataError",
    "InternalInvariantError",
    "ConfigValidationError",
    "ArtifactIOError",
    "RuntimeSettings",
]
