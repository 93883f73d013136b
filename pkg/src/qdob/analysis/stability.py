"""
Stability Checks

Nominal stability from the open-loop phase corridor and robust stability
from the small-gain bound on ``|T~|``, both evaluated on a frequency grid.
"""

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Dict, List, Literal, Optional, Union

import numpy as np

from ..core.filters import RIPPLE_TOLERANCE
from ..utils.errors import InvalidArgumentError
from ..utils.logging import get_logger
from .transfer import LoopModel, default_grid, eval_T_tilde, open_loop_phase

logger = get_logger(__name__)

# Reported violations are capped; the count is always exact.
MAX_REPORTED_VIOLATIONS = 20

UncertaintyProfile = Union[float, Callable[[np.ndarray], np.ndarray]]


@dataclass
class StabilityReport:
    """Outcome of a grid-based stability check."""

    kind: Literal["nominal", "robust"]
    passed: bool
    grid_points: int
    worst_frequency: float
    min_phase: Optional[float] = None
    max_phase: Optional[float] = None
    phi_peak: Optional[float] = None
    margin: Optional[float] = None
    peak_gain: Optional[float] = None
    violation_count: int = 0
    violations: List[Dict[str, float]] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, default=str)

    def get_summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        if self.kind == "nominal":
            return (
                f"nominal {status}: phase in [{math.degrees(self.min_phase):.2f}, "
                f"{math.degrees(self.max_phase):.2f}] deg over {self.grid_points} points"
            )
        return (
            f"robust {status}: max |T~| * Delta = {self.margin:.4f} at "
            f"{self.worst_frequency:.4g} rad/s"
        )


def check_nominal_stability(
    model: LoopModel, grid: Optional[np.ndarray] = None
) -> StabilityReport:
    """
    Require ``-pi < angle(Gamma) <= pi/2`` on every grid point and
    ``|Phi| <= 1`` up to the planner's ripple tolerance.
    """
    w = default_grid(model) if grid is None else np.asarray(grid, dtype=float)
    phase = open_loop_phase(model, w)
    amplitude = np.abs(model.plan.amplitude(w))

    bad = (phase <= -np.pi) | (phase > np.pi / 2) | (amplitude > 1.0 + RIPPLE_TOLERANCE)
    indices = np.flatnonzero(bad)
    violations = [
        {
            "omega": float(w[i]),
            "phase": float(phase[i]),
            "phi_gain": float(amplitude[i]),
        }
        for i in indices[:MAX_REPORTED_VIOLATIONS]
    ]
    worst = int(np.argmin(phase))

    report = StabilityReport(
        kind="nominal",
        passed=indices.size == 0,
        grid_points=int(w.size),
        worst_frequency=float(w[worst]),
        min_phase=float(phase[worst]),
        max_phase=float(np.max(phase)),
        phi_peak=float(np.max(amplitude)),
        violation_count=int(indices.size),
        violations=violations,
    )
    if not report.passed:
        logger.warning(
            report.get_summary(),
            extra={"structured_data": {"operation": "check_nominal_stability", **report.to_dict()}},
        )
    return report


def check_robust_stability(
    model: LoopModel,
    uncertainty: UncertaintyProfile,
    grid: Optional[np.ndarray] = None,
) -> StabilityReport:
    """
    Small-gain check ``|T~(j omega)| * Delta(omega) <= 1`` for all grid points.

    Args:
        model: Loop under test
        uncertainty: Worst-case multiplicative uncertainty gain, constant or
            a vectorized function of omega
        grid: Frequencies in rad/s; defaults to :func:`default_grid`

    Raises:
        InvalidArgumentError: A non-finite or non-positive uncertainty value
    """
    w = default_grid(model) if grid is None else np.asarray(grid, dtype=float)
    gain = eval_T_tilde(model, w)
    if callable(uncertainty):
        delta = np.asarray(uncertainty(w), dtype=float)
    else:
        delta = np.full_like(w, float(uncertainty))
    invalid = ~(np.isfinite(delta) & (delta > 0))
    if np.any(invalid):
        raise InvalidArgumentError(
            "uncertainty bound must be finite and positive",
            argument="uncertainty",
            value=float(delta[invalid][0]),
        )
    product = gain * delta

    indices = np.flatnonzero(product > 1.0)
    worst = int(np.argmax(product))
    return StabilityReport(
        kind="robust",
        passed=indices.size == 0,
        grid_points=int(w.size),
        worst_frequency=float(w[worst]),
        margin=float(product[worst]),
        peak_gain=float(np.max(gain)),
        violation_count=int(indices.size),
        violations=[
            {"omega": float(w[i]), "product": float(product[i])}
            for i in indices[:MAX_REPORTED_VIOLATIONS]
        ],
    )
