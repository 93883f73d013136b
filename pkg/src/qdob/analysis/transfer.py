"""
Transfer Function Evaluation

Closed-form frequency responses of the QDOB loop: the delayed low-pass
``Phi``, the periodic-pass Q-filter, the inverse-plant low-pass ``B``, the
open loop ``Gamma``, and the sensitivity pair ``S``/``T``. Every function
accepts a scalar or an array of frequencies in rad/s on ``[0, pi/T]``.
"""

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from ..core.filters import FirStage, MultistagePlan, plan_multistage
from ..core.observer import QdobConfig, compute_omega_c
from ..utils.errors import DomainError, InvalidArgumentError

Frequencies = Union[float, Sequence[float], np.ndarray]

DEFAULT_POINTS_PER_DECADE = 400
DEFAULT_GRID_START = 1e-2


@dataclass(eq=False)
class FrequencyResponse:
    """Complex samples of one transfer function on an ascending grid."""

    omega: np.ndarray
    values: np.ndarray
    label: str
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.omega = np.asarray(self.omega, dtype=float)
        self.values = np.asarray(self.values, dtype=complex)
        if self.omega.ndim != 1 or self.values.shape != self.omega.shape:
            raise InvalidArgumentError(
                f"{self.label}: {self.values.shape} samples for grid {self.omega.shape}",
                argument="values",
            )
        if np.any(np.diff(self.omega) <= 0):
            raise InvalidArgumentError(
                f"{self.label}: frequency grid must be strictly ascending",
                argument="omega",
            )

    def __len__(self) -> int:
        return self.omega.size

    def magnitude(self) -> np.ndarray:
        return np.abs(self.values)

    def magnitude_db(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return 20.0 * np.log10(np.abs(self.values))

    def phase_deg(self) -> np.ndarray:
        return np.degrees(np.angle(self.values))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "label": self.label,
            "metadata": self.metadata,
            "omega": self.omega,
            "re": self.values.real,
            "im": self.values.imag,
            "mag_db": self.magnitude_db(),
            "phase_deg": self.phase_deg(),
        }


@dataclass(frozen=True, eq=False)
class LoopModel:
    """A QDOB configuration with its plan and ``omega_c`` precomputed."""

    config: QdobConfig
    plan: MultistagePlan
    omega_c: float

    @classmethod
    def from_config(cls, config: QdobConfig) -> "LoopModel":
        omega_c = compute_omega_c(config.rho, config.period)
        plan = plan_multistage(
            config.sample_time,
            config.period,
            config.omega_a,
            config.stages,
            config.order_max,
        )
        return cls(config=config, plan=plan, omega_c=omega_c)

    @property
    def sample_time(self) -> float:
        return self.config.sample_time

    @property
    def nyquist(self) -> float:
        return math.pi / self.config.sample_time

    @property
    def loop_gain(self) -> float:
        """``omega_c * L``."""
        return self.omega_c * self.config.period


def _grid(omega: Frequencies, T: float) -> Tuple[np.ndarray, bool]:
    w = np.asarray(omega, dtype=float)
    scalar = w.ndim == 0
    w = np.atleast_1d(w)
    nyquist = math.pi / T
    if not np.all(np.isfinite(w)) or np.any(w < 0) or np.any(w > nyquist * (1 + 1e-12)):
        raise DomainError(
            f"frequencies must lie in [0, {nyquist:.6g}] rad/s",
            invariant="omega_in_nyquist_range",
            details={"min": float(np.min(w)), "max": float(np.max(w))},
        )
    return w, scalar


def _result(values: np.ndarray, scalar: bool) -> Union[complex, np.ndarray]:
    return complex(values[0]) if scalar else values


def eval_phi(plan: MultistagePlan, T: float, omega: Frequencies):
    """``Phi(j omega)``: delay of ``L_bar`` samples times the real cascade amplitude."""
    w, scalar = _grid(omega, T)
    return _result(plan.response(w), scalar)


def eval_stage(stage: FirStage, T: float, omega: Frequencies):
    """Causal response of a single FIR stage."""
    w, scalar = _grid(omega, T)
    return _result(stage.response(w, T), scalar)


def eval_B(model: LoopModel, omega: Frequencies):
    w, scalar = _grid(omega, model.sample_time)
    return _result(model.config.omega_b / (1j * w + model.config.omega_b), scalar)


def _phi(model: LoopModel, w: np.ndarray) -> np.ndarray:
    return model.plan.response(w)


def _b(model: LoopModel, w: np.ndarray) -> np.ndarray:
    return model.config.omega_b / (1j * w + model.config.omega_b)


def _periodic_pass(a: float, delay: np.ndarray) -> np.ndarray:
    return a * (1.0 + delay) / ((a + 2.0) + (a - 2.0) * delay)


def eval_Q(model: LoopModel, omega: Frequencies):
    """``Q = omega_c L (1 + Phi) / ((omega_c L + 2) + (omega_c L - 2) Phi)``."""
    w, scalar = _grid(omega, model.sample_time)
    return _result(_periodic_pass(model.loop_gain, _phi(model, w)), scalar)


def eval_periodic_pass(model: LoopModel, omega: Frequencies):
    """First-order periodic-pass filter built on the pure delay ``exp(-j L omega)``."""
    w, scalar = _grid(omega, model.sample_time)
    delay = np.exp(-1j * model.config.period * w)
    return _result(_periodic_pass(model.loop_gain, delay), scalar)


def eval_open_loop(model: LoopModel, omega: Frequencies):
    """
    ``Gamma = (omega_c L / 2)(1 + Phi)/(1 - Phi) B``.

    Where ``1 - Phi`` vanishes exactly the sample is ``inf + 0j``.
    """
    w, scalar = _grid(omega, model.sample_time)
    phi = _phi(model, w)
    gap = 1.0 - phi
    with np.errstate(divide="ignore", invalid="ignore"):
        gamma = 0.5 * model.loop_gain * (1.0 + phi) / gap * _b(model, w)
    gamma = np.where(gap == 0, complex(np.inf, 0.0), gamma)
    return _result(gamma, scalar)


def _closed_loop(model: LoopModel, w: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    phi = _phi(model, w)
    ab = model.loop_gain * _b(model, w)
    denominator = (ab + 2.0) + (ab - 2.0) * phi
    return 2.0 * (1.0 - phi) / denominator, ab * (1.0 + phi) / denominator


def eval_S(model: LoopModel, omega: Frequencies):
    """Sensitivity ``2(1 - Phi) / ((omega_c L B + 2) + (omega_c L B - 2) Phi)``."""
    w, scalar = _grid(omega, model.sample_time)
    return _result(_closed_loop(model, w)[0], scalar)


def eval_T(model: LoopModel, omega: Frequencies):
    """Complementary sensitivity ``omega_c L (1 + Phi) B / (same denominator as S)``."""
    w, scalar = _grid(omega, model.sample_time)
    return _result(_closed_loop(model, w)[1], scalar)


def eval_T_tilde(model: LoopModel, omega: Frequencies):
    """
    ``|T~(j omega)|`` from the two closed forms: the ideal-delay branch for
    ``omega <= omega_a`` and the inverse-plant low-pass branch above.
    """
    w, scalar = _grid(omega, model.sample_time)
    a = model.loop_gain
    cfg = model.config
    half = 0.5 * cfg.period * w
    # a / sqrt(a^2 + 4 tan^2) written without the tangent pole
    cos_half = np.cos(half)
    low = a * np.abs(cos_half) / np.sqrt((a * cos_half) ** 2 + 4.0 * np.sin(half) ** 2)
    high = a * cfg.omega_b / np.sqrt(4.0 * w**2 + ((2.0 + a) * cfg.omega_b) ** 2)
    gain = np.where(w <= cfg.omega_a, low, high)
    return float(gain[0]) if scalar else gain


class ApproximationBands(NamedTuple):
    """Band-wise approximations, each evaluated on the full grid."""

    low: np.ndarray
    mid: np.ndarray
    high: np.ndarray


def _approximations(model: LoopModel, w: np.ndarray, numerator: Callable) -> ApproximationBands:
    a = model.loop_gain
    delay = np.exp(-1j * model.config.period * w)
    ab = a * _b(model, w)
    ones = np.ones_like(w, dtype=complex)
    return ApproximationBands(
        low=numerator(a, delay) / ((a + 2.0) + (a - 2.0) * delay),
        mid=numerator(a, 0.0 * ones) / (a + 2.0),
        high=numerator(ab, 0.0 * ones) / (ab + 2.0),
    )


def eval_S_approx(model: LoopModel, omega: Frequencies) -> ApproximationBands:
    """``S`` with ``Phi ~ exp(-jL omega), B ~ 1`` (low), ``Phi ~ 0, B ~ 1`` (mid), ``Phi ~ 0`` (high)."""
    w, _ = _grid(omega, model.sample_time)
    return _approximations(model, w, lambda a, phi: 2.0 * (1.0 - phi))


def eval_T_approx(model: LoopModel, omega: Frequencies) -> ApproximationBands:
    w, _ = _grid(omega, model.sample_time)
    return _approximations(model, w, lambda a, phi: a * (1.0 + phi))


def wrap_phase(phase: np.ndarray) -> np.ndarray:
    """Wrap radians into ``(-pi, pi]``."""
    return phase - 2.0 * np.pi * np.ceil((phase - np.pi) / (2.0 * np.pi))


def open_loop_phase(model: LoopModel, omega: Frequencies) -> np.ndarray:
    """
    ``angle(Gamma) = atan2(-2|Phi| sin(L omega), 1 - |Phi|^2) + angle(B)``.

    The decomposition holds for ``|Phi| <= 1``; passband ripple above unity is
    clipped here and reported separately by the nominal stability check.
    """
    w, _ = _grid(omega, model.sample_time)
    gain = np.minimum(np.abs(model.plan.amplitude(w)), 1.0)
    theta = model.config.period * w
    periodic = np.arctan2(-2.0 * gain * np.sin(theta), 1.0 - gain**2)
    return wrap_phase(periodic + np.arctan2(-w, model.config.omega_b))


def harmonic_points(model: LoopModel, stop: Optional[float] = None) -> np.ndarray:
    """``n omega_0`` and ``n omega_0 +- rho`` for harmonics up to ``omega_a``."""
    cfg = model.config
    stop = model.nyquist if stop is None else stop
    omega_0 = cfg.fundamental
    count = int(math.ceil(cfg.omega_a / omega_0))
    n = np.arange(1, count + 1, dtype=float) * omega_0
    points = np.concatenate((n, n - cfg.rho, n + cfg.rho))
    return points[(points > 0) & (points <= stop)]


def default_grid(
    model: LoopModel,
    points_per_decade: int = DEFAULT_POINTS_PER_DECADE,
    start: float = DEFAULT_GRID_START,
    stop: Optional[float] = None,
    include_harmonics: bool = True,
) -> np.ndarray:
    """Logarithmic grid up to ``pi/T`` augmented with the harmonic points."""
    stop = model.nyquist if stop is None else min(stop, model.nyquist)
    if points_per_decade < 1 or not 0 < start < stop:
        raise InvalidArgumentError(
            f"empty grid: start={start!r}, stop={stop!r}, points_per_decade={points_per_decade!r}",
            argument="grid",
        )
    decades = math.log10(stop / start)
    grid = np.geomspace(start, stop, max(2, int(math.ceil(decades * points_per_decade)) + 1))
    if include_harmonics:
        grid = np.concatenate((grid, harmonic_points(model, stop)))
    return np.unique(grid)


def log_sweep_grid(start_exp: float = 0.0, step: float = 0.025, count: int = 81) -> np.ndarray:
    """``10 ** (start_exp + step * i)`` for ``i = 0 .. count-1``."""
    if count < 1:
        raise InvalidArgumentError("sweep grid needs at least one point", argument="count")
    return 10.0 ** (start_exp + step * np.arange(count))


def harmonic_sweep_grid(
    omega_0: float,
    harmonics: Sequence[int],
    points: int = 9,
    spacing: float = 0.005,
) -> np.ndarray:
    """Dense log-spaced points centred on each harmonic ``j omega_0``."""
    offsets = spacing * (np.arange(points) - (points - 1) / 2.0)
    centres = np.log10(np.asarray(harmonics, dtype=float) * omega_0)
    return np.unique(10.0 ** np.add.outer(centres, offsets).ravel())


RESPONSES: Dict[str, Callable[[LoopModel, np.ndarray], np.ndarray]] = {
    "phi": lambda model, w: eval_phi(model.plan, model.sample_time, w),
    "q": eval_Q,
    "b": eval_B,
    "periodic_pass": eval_periodic_pass,
    "open_loop": eval_open_loop,
    "s": eval_S,
    "t": eval_T,
}


def evaluate_response(model: LoopModel, name: str, omega: np.ndarray) -> FrequencyResponse:
    """Sample one of :data:`RESPONSES` on ``omega``."""
    if name not in RESPONSES:
        raise InvalidArgumentError(f"unknown response {name!r}", argument="name", value=name)
    w = np.atleast_1d(np.asarray(omega, dtype=float))
    return FrequencyResponse(
        omega=w,
        values=RESPONSES[name](model, w),
        label=name,
        metadata={"config": model.config.model_dump(), "omega_c": model.omega_c},
    )
