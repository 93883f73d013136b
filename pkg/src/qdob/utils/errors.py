"""
QDOB Error Types

Custom exception classes for filter design, observer stepping, simulation and
analysis, each carrying a stable error code and structured details.
"""

from typing import Any, Dict, List, Optional


class QdobError(Exception):
    """Base exception for all qdob errors."""

    def __init__(
        self,
        message: str,
        error_code: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        super().__init__(message)
        self.message = message
        self.error_code = error_code
        self.details = details or {}

    def __str__(self) -> str:
        if self.error_code:
            return f"[{self.error_code}] {self.message}"
        return self.message


class InvalidArgumentError(QdobError):
    """Raised when a design parameter is non-positive or non-finite."""

    def __init__(
        self,
        message: str,
        argument: Optional[str] = None,
        value: Any = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        super().__init__(message, "INVALID_ARGUMENT", details)
        self.argument = argument
        self.value = value


class AliasingConfigError(QdobError):
    """Raised when a stage cutoff reaches the stage Nyquist frequency."""

    def __init__(
        self,
        message: str,
        stage: Optional[int] = None,
        cutoff: Optional[float] = None,
        nyquist: Optional[float] = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        super().__init__(message, "ALIASING_CONFIG", details)
        self.stage = stage
        self.cutoff = cutoff
        self.nyquist = nyquist


class PlanInfeasibleError(QdobError):
    """Raised when the period is too short to host the filter cascade."""

    def __init__(
        self,
        message: str,
        period_samples: Optional[int] = None,
        stage_steps_sum: Optional[int] = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        super().__init__(message, "PLAN_INFEASIBLE", details)
        self.period_samples = period_samples
        self.stage_steps_sum = stage_steps_sum


class DomainError(QdobError):
    """Raised when an argument lies outside the mathematical domain."""

    def __init__(
        self,
        message: str,
        invariant: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        super().__init__(message, "DOMAIN_ERROR", details)
        self.invariant = invariant


class NumericFaultError(QdobError):
    """Raised when a stepper or simulation produces a non-finite value."""

    def __init__(
        self,
        message: str,
        stage: Optional[str] = None,
        step_index: Optional[int] = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        super().__init__(message, "NUMERIC_FAULT", details)
        self.stage = stage
        self.step_index = step_index


class InsufficientDataError(QdobError):
    """Raised when a record is too short for the requested analysis."""

    def __init__(
        self,
        message: str,
        available: Optional[float] = None,
        required: Optional[float] = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        super().__init__(message, "INSUFFICIENT_DATA", details)
        self.available = available
        self.required = required


class InternalInvariantError(QdobError):
    """Raised when a buffer is read beyond its construction-time capacity."""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, "INTERNAL_INVARIANT", details)


class ConfigValidationError(QdobError):
    """Raised when an experiment configuration fails schema validation."""

    def __init__(
        self,
        message: str,
        failing_keys: Optional[List[str]] = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        super().__init__(message, "CONFIG_VALIDATION", details)
        self.failing_keys = failing_keys or []


class ArtifactIOError(QdobError):
    """Raised when a config cannot be read or an artifact cannot be written."""

    def __init__(
        self,
        message: str,
        path: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        super().__init__(message, "ARTIFACT_IO", details)
        self.path = path
