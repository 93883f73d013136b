"""
QDOB Filter Primitives

Blackman-windowed sinc FIR stages, the multistage linear-phase low-pass
cascade used by the periodic-pass Q-filter, ring-buffer delay lines, and the
backward-Euler inverse-plant path for a ``1/(M s^2)`` plant model.
"""

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.signal import windows

from ..utils.errors import (
    AliasingConfigError,
    InternalInvariantError,
    InvalidArgumentError,
    NumericFaultError,
    PlanInfeasibleError,
)
from ..utils.logging import get_logger, log_plan_built

logger = get_logger(__name__)

# Tolerated overshoot of |Phi| above unity before the planner warns.
RIPPLE_TOLERANCE = 1e-3


def rnd(value: float) -> int:
    """Round half away from zero."""
    return int(math.copysign(math.floor(abs(value) + 0.5), value))


def _require_positive(name: str, value: float) -> None:
    if not math.isfinite(value) or value <= 0:
        raise InvalidArgumentError(
            f"{name} must be positive and finite, got {value!r}",
            argument=name,
            value=value,
        )


def blackman_window(order: int) -> np.ndarray:
    """Blackman window ``w(n, N)`` sampled at ``n = -N..N``."""
    # The symmetric (2N+1)-point window equals 0.42 + 0.5cos(n pi/N) + 0.08cos(2n pi/N).
    return windows.blackman(2 * order + 1, sym=True)


def ideal_lowpass_coefficients(
    omega: float, stage_period: float, order: int
) -> np.ndarray:
    """Ideal zero-phase low-pass coefficients ``h(n, omega, U)`` for ``n = -N..N``."""
    n = np.arange(-order, order + 1, dtype=float)
    scale = stage_period * omega / math.pi
    # h(0) = U*omega/pi, h(n) = sin(n*U*omega)/(n*pi)
    return scale * np.sinc(n * scale)


@dataclass(frozen=True, eq=False)
class FirStage:
    """One normalized Blackman-windowed sinc stage of the cascade."""

    order: int
    stage_period: float
    stage_steps: int
    cutoff: float
    coeffs: np.ndarray = field(repr=False)
    normalizer: float

    @property
    def span(self) -> int:
        """Largest lag (in base samples) read by the stage."""
        return 2 * self.order * self.stage_steps

    @property
    def group_delay_steps(self) -> int:
        return self.order * self.stage_steps

    def amplitude(self, phase_step: np.ndarray) -> np.ndarray:
        """Real zero-phase amplitude for per-tap phase advance ``phase_step``."""
        x = np.atleast_1d(np.asarray(phase_step, dtype=float))
        n = np.arange(1, self.order + 1, dtype=float)
        tail = self.coeffs[self.order + 1 :]
        return self.coeffs[self.order] + 2.0 * np.cos(np.outer(x, n)) @ tail

    def response(self, omega: np.ndarray, base_period: float) -> np.ndarray:
        """Causal stage response ``phi_i(j omega)`` with taps spaced ``stage_steps * T``."""
        w = np.atleast_1d(np.asarray(omega, dtype=float))
        spacing = self.stage_steps * base_period
        delay = self.group_delay_steps * base_period
        return np.exp(-1j * delay * w) * self.amplitude(spacing * w)


def design_fir_stage(
    omega: float,
    stage_period: float,
    order: int,
    base_period: Optional[float] = None,
) -> FirStage:
    """
    Design one windowed-sinc stage.

    Args:
        omega: Stage cutoff frequency in rad/s
        stage_period: Stage sampling time U_i in seconds
        order: Half-length N of the stage (2N+1 taps)
        base_period: Controller sampling time T; the taps are spaced
            rnd(U_i/T) samples. Defaults to ``stage_period``.

    Returns:
        FirStage with coefficients normalized to unit sum

    Raises:
        InvalidArgumentError: Non-positive inputs
        AliasingConfigError: Cutoff at or above the stage Nyquist frequency
    """
    _require_positive("omega", omega)
    _require_positive("stage_period", stage_period)
    if order < 1:
        raise InvalidArgumentError(
            f"order must be >= 1, got {order}", argument="order", value=order
        )
    if stage_period * omega >= math.pi:
        raise AliasingConfigError(
            f"cutoff {omega:.6g} rad/s is not below the stage Nyquist "
            f"frequency {math.pi / stage_period:.6g} rad/s",
            cutoff=omega,
            nyquist=math.pi / stage_period,
        )

    if base_period is None:
        steps = 1
    else:
        _require_positive("base_period", base_period)
        steps = max(1, rnd(stage_period / base_period))

    raw = blackman_window(order) * ideal_lowpass_coefficients(
        omega, stage_period, order
    )
    normalizer = float(np.sum(raw))
    coeffs = raw / normalizer
    coeffs.setflags(write=False)

    return FirStage(
        order=order,
        stage_period=stage_period,
        stage_steps=steps,
        cutoff=omega,
        coeffs=coeffs,
        normalizer=normalizer,
    )


@dataclass(frozen=True, eq=False)
class MultistagePlan:
    """Preliminary computations of the linear-phase low-pass cascade."""

    base_period: float
    period: float
    omega_a: float
    coefficient: float
    order: int
    residual_delay: int
    period_samples: int
    stages: Tuple[FirStage, ...]

    @property
    def stage_count(self) -> int:
        return len(self.stages)

    @property
    def stage_periods(self) -> List[float]:
        return [stage.stage_period for stage in self.stages]

    @property
    def stage_steps(self) -> List[int]:
        return [stage.stage_steps for stage in self.stages]

    @property
    def cutoffs(self) -> List[float]:
        return [stage.cutoff for stage in self.stages]

    def amplitude(self, omega: np.ndarray) -> np.ndarray:
        """Real amplitude of ``Phi(j omega)`` (product of stage amplitudes)."""
        w = np.atleast_1d(np.asarray(omega, dtype=float))
        amp = np.ones_like(w)
        for stage in self.stages:
            amp = amp * stage.amplitude(stage.stage_steps * self.base_period * w)
        return amp

    def response(self, omega: np.ndarray) -> np.ndarray:
        """``Phi(j omega)``: pure delay of ``period_samples`` times the real amplitude."""
        w = np.atleast_1d(np.asarray(omega, dtype=float))
        delay = self.period_samples * self.base_period
        return np.exp(-1j * delay * w) * self.amplitude(w)

    def to_dict(self) -> dict:
        return {
            "base_period": self.base_period,
            "period": self.period,
            "omega_a": self.omega_a,
            "coefficient": self.coefficient,
            "order": self.order,
            "residual_delay": self.residual_delay,
            "period_samples": self.period_samples,
            "stage_periods": self.stage_periods,
            "stage_steps": self.stage_steps,
            "cutoffs": self.cutoffs,
        }


def plan_multistage(
    T: float, L: float, omega_a: float, stages: int, order_max: int
) -> MultistagePlan:
    """
    Compute the multistage plan for sampling time ``T`` and period ``L``.

    Raises:
        InvalidArgumentError: Non-positive inputs
        PlanInfeasibleError: Period too short for the cascade
        AliasingConfigError: A stage cutoff reaches its Nyquist frequency
    """
    _require_positive("T", T)
    _require_positive("L", L)
    _require_positive("omega_a", omega_a)
    if stages < 1:
        raise InvalidArgumentError(
            f"stage count must be >= 1, got {stages}", argument="l", value=stages
        )
    if order_max < 1:
        raise InvalidArgumentError(
            f"N_max must be >= 1, got {order_max}", argument="N_max", value=order_max
        )
    if L <= 2 * T:
        raise PlanInfeasibleError(
            f"period {L:.6g} s must exceed two samples ({2 * T:.6g} s)",
            period_samples=rnd(L / T),
        )
    if T * omega_a >= math.pi:
        raise AliasingConfigError(
            f"omega_a={omega_a:.6g} rad/s is not below the Nyquist frequency "
            f"{math.pi / T:.6g} rad/s",
            stage=stages,
            cutoff=omega_a,
            nyquist=math.pi / T,
        )

    c = 0.5 * (T * omega_a / math.pi) ** (1.0 / stages)

    periods: List[float] = []
    cutoffs: List[float] = []
    for i in range(1, stages + 1):
        U = T if i == 1 else math.pi / cutoffs[-1]
        omega_i = omega_a if i == stages else 2.0 * math.pi * c / U
        if U * omega_i >= math.pi:
            raise AliasingConfigError(
                f"stage {i} cutoff {omega_i:.6g} rad/s reaches its Nyquist "
                f"frequency {math.pi / U:.6g} rad/s",
                stage=i,
                cutoff=omega_i,
                nyquist=math.pi / U,
            )
        periods.append(U)
        cutoffs.append(omega_i)

    steps = [max(1, rnd(U / T)) for U in periods]
    period_samples = rnd(L / T)
    steps_sum = sum(steps)
    order = min((period_samples - 1) // steps_sum, order_max)
    if order < 1:
        raise PlanInfeasibleError(
            f"period of {period_samples} samples cannot host a cascade spanning "
            f"{steps_sum} samples per order",
            period_samples=period_samples,
            stage_steps_sum=steps_sum,
        )

    designed = tuple(
        design_fir_stage(omega_i, U, order, base_period=T)
        for omega_i, U in zip(cutoffs, periods)
    )
    plan = MultistagePlan(
        base_period=T,
        period=L,
        omega_a=omega_a,
        coefficient=c,
        order=order,
        residual_delay=period_samples - order * steps_sum,
        period_samples=period_samples,
        stages=designed,
    )

    log_plan_built(
        logger,
        stages=stages,
        order=order,
        residual_delay=plan.residual_delay,
        period_samples=period_samples,
        additional_data={"stage_steps": steps, "cutoffs": cutoffs},
    )
    _check_ripple(plan)
    return plan


def _check_ripple(plan: MultistagePlan, points: int = 4000) -> float:
    """Warn when ``|Phi|`` exceeds unity by more than the ripple tolerance."""
    nyquist = math.pi / plan.base_period
    grid = np.concatenate(
        ([0.0], np.geomspace(min(1e-2, nyquist / 10), nyquist, points))
    )
    peak = float(np.max(np.abs(plan.amplitude(grid))))
    if peak > 1.0 + RIPPLE_TOLERANCE:
        logger.warning(
            f"|Phi| peaks at {peak:.6f} > 1 + {RIPPLE_TOLERANCE}; "
            "nominal stability assumes |Phi| <= 1",
            extra={
                "structured_data": {
                    "operation": "plan_multistage",
                    "peak_gain": peak,
                    "order": plan.order,
                }
            },
        )
    return peak


class DelayLine:
    """Fixed-capacity ring buffer; lag 0 is the most recently written sample."""

    def __init__(self, capacity: int):
        if capacity < 1:
            raise InvalidArgumentError(
                f"capacity must be >= 1, got {capacity}",
                argument="capacity",
                value=capacity,
            )
        self.capacity = capacity
        # Mirrored storage keeps any window of `capacity` samples contiguous.
        self._buffer = np.zeros(2 * capacity, dtype=np.float64)
        self._head = capacity - 1

    def write(self, sample: float) -> None:
        self._head = (self._head + 1) % self.capacity
        self._buffer[self._head] = sample
        self._buffer[self._head + self.capacity] = sample

    def read(self, lag: int) -> float:
        """Sample written ``lag`` steps ago."""
        if not 0 <= lag < self.capacity:
            raise InternalInvariantError(
                f"lag {lag} outside delay line of capacity {self.capacity}",
                details={"lag": lag, "capacity": self.capacity},
            )
        return float(self._buffer[self._head + self.capacity - lag])

    def taps(self, stride: int, count: int) -> np.ndarray:
        """Samples at lags ``(count-1)*stride, ..., stride, 0`` (oldest first)."""
        span = (count - 1) * stride
        if span >= self.capacity:
            raise InternalInvariantError(
                f"tap span {span} exceeds delay line capacity {self.capacity}",
                details={"span": span, "capacity": self.capacity},
            )
        newest = self._head + self.capacity
        return self._buffer[newest - span : newest + 1 : stride]

    def reset(self) -> None:
        self._buffer[:] = 0.0
        self._head = self.capacity - 1


class MultistageFilter:
    """
    Stateful realization of the cascade: reads the residual-delayed input
    from a history line and pushes it through the FIR stages.
    """

    def __init__(self, plan: MultistagePlan):
        self.plan = plan
        self._lines = [DelayLine(stage.span + 1) for stage in plan.stages]
        self._taps = 2 * plan.order + 1

    @property
    def history_capacity(self) -> int:
        """Capacity a caller's input history must provide."""
        return self.plan.period_samples + 1

    def apply(self, history: DelayLine) -> float:
        """
        Filter output for the current step.

        ``history`` holds the input up to the previous step at lag 0, so the
        cascade input delayed by ``residual_delay`` steps sits at lag
        ``residual_delay - 1``.
        """
        theta = history.read(self.plan.residual_delay - 1)
        for stage, line in zip(self.plan.stages, self._lines):
            line.write(theta)
            theta = float(np.dot(stage.coeffs, line.taps(stage.stage_steps, self._taps)))
        return theta

    def reset(self) -> None:
        for line in self._lines:
            line.reset()


def multistage_apply(cascade: MultistageFilter, history: DelayLine) -> float:
    """Function form of :meth:`MultistageFilter.apply`."""
    return cascade.apply(history)


@dataclass
class InversePlantState:
    """History of the backward-Euler ``B(s) M s^2`` path."""

    y1: float = 0.0
    y2: float = 0.0
    xi1: float = 0.0

    def reset(self) -> None:
        self.y1 = self.y2 = self.xi1 = 0.0


def inverse_plant_step(
    state: InversePlantState, y: float, mass: float, omega_b: float, T: float
) -> float:
    """
    One step of ``xi = B P_n^{-1} y`` discretized by backward Euler.

    Raises:
        NumericFaultError: Non-finite input or output
    """
    if not math.isfinite(y):
        raise NumericFaultError(
            f"non-finite plant output {y!r}", stage="inverse_plant"
        )
    xi = (T * state.xi1 + mass * omega_b * (y - 2.0 * state.y1 + state.y2)) / (
        T * (1.0 + omega_b * T)
    )
    if not math.isfinite(xi):
        raise NumericFaultError("inverse plant diverged", stage="inverse_plant")
    state.y2 = state.y1
    state.y1 = y
    state.xi1 = xi
    return xi


def stage_summary(stages: Sequence[FirStage]) -> List[dict]:
    """Per-stage parameters for reports."""
    return [
        {
            "stage": i + 1,
            "order": s.order,
            "stage_period": s.stage_period,
            "stage_steps": s.stage_steps,
            "cutoff": s.cutoff,
            "normalizer": s.normalizer,
        }
        for i, s in enumerate(stages)
    ]
