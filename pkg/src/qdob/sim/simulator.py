"""
Closed-Loop Simulator

Fixed-step simulation of the outer PD loop, a disturbance observer (QDOB,
baseline or none) and the double-integrator plant.
"""

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional, Protocol, Tuple, Union

import numpy as np

from ..core.filters import rnd
from ..utils.errors import InvalidArgumentError, NumericFaultError
from ..utils.logging import get_logger, log_simulation_run
from .disturbances import DisturbanceGenerator
from .outer import OuterPdController
from .plant import PlantDoubleIntegrator

logger = get_logger(__name__)

TRACE_COLUMNS = ("t", "r", "u", "d", "dhat", "y", "e")

# Runs shorter than this many periods trigger a warning.
MIN_PERIODS = 10


class Observer(Protocol):
    """Anything stepping ``(r_k, y_k) -> (u_k, dhat_k)``."""

    sample_time: float

    def step(self, r: float, y: float) -> Tuple[float, float]: ...

    def reset(self) -> None: ...


DisturbanceSource = Union[DisturbanceGenerator, Callable[[np.ndarray], np.ndarray], np.ndarray]


@dataclass
class SimTrace:
    """Per-step records of a closed-loop run on a uniform time grid."""

    t: np.ndarray
    r: np.ndarray
    u: np.ndarray
    d: np.ndarray
    dhat: np.ndarray
    y: np.ndarray
    e: np.ndarray
    sample_time: float
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.t)

    def column(self, name: str) -> np.ndarray:
        if name not in TRACE_COLUMNS:
            raise InvalidArgumentError(f"unknown trace column {name!r}", argument="column")
        return getattr(self, name)

    def window(self, start_time: float = 0.0) -> slice:
        """Samples with ``t >= start_time``."""
        return slice(min(len(self), max(0, math.ceil(start_time / self.sample_time - 1e-9))), None)

    def rms(self, name: str = "y", start_time: float = 0.0) -> float:
        values = self.column(name)[self.window(start_time)]
        if values.size == 0:
            return 0.0
        return float(np.sqrt(np.mean(values**2)))


def _sample_disturbance(source: DisturbanceSource, t: np.ndarray) -> np.ndarray:
    if isinstance(source, np.ndarray):
        if source.shape[0] < t.shape[0]:
            raise InvalidArgumentError(
                f"disturbance holds {source.shape[0]} samples, run needs {t.shape[0]}",
                argument="disturbance",
            )
        return np.asarray(source[: t.shape[0]], dtype=float)
    return np.asarray(source(t), dtype=float)


def _check_sample_times(plant: PlantDoubleIntegrator, *components: Any) -> None:
    for component in components:
        if component is None:
            continue
        if not math.isclose(component.sample_time, plant.sample_time, rel_tol=1e-12):
            raise InvalidArgumentError(
                f"{type(component).__name__} samples at {component.sample_time!r} s, "
                f"plant at {plant.sample_time!r} s",
                argument="T",
                value=component.sample_time,
            )


def run_closed_loop(
    plant: PlantDoubleIntegrator,
    disturbance: DisturbanceSource,
    duration: float,
    observer: Optional[Observer] = None,
    outer: Optional[OuterPdController] = None,
    command: Optional[Callable[[np.ndarray], np.ndarray]] = None,
    period: Optional[float] = None,
    label: Optional[str] = None,
    metadata: Optional[Dict[str, Any]] = None,
) -> SimTrace:
    """
    Simulate ``round(duration/T) + 1`` samples from the current component states.

    Per step the outer loop maps the command and ``y_k`` to ``r_k``, the
    observer maps ``(r_k, y_k)`` to ``u_k`` and the plant holds ``u_k`` plus
    the exogenous disturbance for one sample.

    Args:
        plant: Plant to drive
        disturbance: Generator, vectorized callable of time, or sample array
        duration: Simulated time in seconds
        observer: QDOB or baseline; ``None`` passes ``r`` straight through
        outer: Optional outer PD controller; without it ``r = 0``
        command: Vectorized position command; defaults to zero
        period: Disturbance period for the duration warning
        label: Controller label for logs and metadata
        metadata: Extra metadata copied into the trace

    Raises:
        InvalidArgumentError: Mismatched sampling times or a short sample array
        NumericFaultError: A non-finite value, carrying the step index
    """
    if not (math.isfinite(duration) and duration >= 0):
        raise InvalidArgumentError(
            "duration must be non-negative", argument="duration", value=duration
        )
    _check_sample_times(plant, observer, outer)

    T = plant.sample_time
    count = rnd(duration / T) + 1
    t = np.arange(count) * T
    v = _sample_disturbance(disturbance, t)
    theta = np.zeros(count) if command is None else np.asarray(command(t), dtype=float)

    if period is None:
        period = getattr(getattr(observer, "config", None), "period", None)
    if period is None and isinstance(disturbance, DisturbanceGenerator):
        period = disturbance.profile.period
    if period is not None and duration < MIN_PERIODS * period:
        logger.warning(
            f"duration {duration:g} s is shorter than {MIN_PERIODS} periods",
            extra={
                "structured_data": {
                    "operation": "run_closed_loop",
                    "duration": duration,
                    "period": period,
                }
            },
        )

    records = np.empty((len(TRACE_COLUMNS) - 1, count))
    for k in range(count):
        y = plant.output
        r = outer.step(theta[k], y) if outer is not None else 0.0
        if observer is not None:
            try:
                u, dhat = observer.step(r, y)
            except NumericFaultError as e:
                e.step_index = k
                raise
        else:
            u, dhat = r, 0.0
        d = plant.step(u, v[k])
        if not (math.isfinite(y) and math.isfinite(u) and math.isfinite(d)):
            raise NumericFaultError(
                f"simulation diverged at t={t[k]:.6g} s", stage="plant", step_index=k
            )
        records[:, k] = (r, u, d, dhat, y, theta[k] - y)

    label = label or (type(observer).__name__ if observer is not None else "none")
    trace = SimTrace(
        t,
        *records,
        sample_time=T,
        metadata={"controller": label, "duration": duration, **(metadata or {})},
    )
    log_simulation_run(logger, label, count, duration, trace.rms("y"))
    return trace
