"""
Plant Models

Double-integrator plant ``x'' = (u + d)/M`` discretized by exact zero-order
hold, with optional multiplicative modeling error ``P = (1 + Delta) P_n``.
"""

import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional

import numpy as np

from ..core.filters import DelayLine, rnd
from ..utils.errors import InvalidArgumentError


@dataclass(frozen=True)
class ModelingError:
    """
    ``Delta(s) = (1/mass_ratio - 1) + beta * exp(-delay*s) / (s + alpha)``.

    ``mass_ratio`` is the true inertia over the nominal one; the rational
    term is realized by an exact zero-order-hold state update sampled once per
    step.
    """

    mass_ratio: float = 1.0
    beta: float = 0.0
    alpha: float = 1.0
    delay: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.mass_ratio) and self.mass_ratio > 0):
            raise InvalidArgumentError(
                "mass_ratio must be positive", argument="mass_ratio", value=self.mass_ratio
            )
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise InvalidArgumentError(
                "alpha must be positive", argument="alpha", value=self.alpha
            )
        if not (math.isfinite(self.delay) and self.delay >= 0):
            raise InvalidArgumentError(
                "delay must be non-negative", argument="delay", value=self.delay
            )
        if not math.isfinite(self.beta):
            raise InvalidArgumentError("beta must be finite", argument="beta", value=self.beta)

    @property
    def is_nominal(self) -> bool:
        return self.mass_ratio == 1.0 and self.beta == 0.0

    def gain(self, omega: np.ndarray) -> np.ndarray:
        """``|Delta(j omega)|``, usable as a worst-case uncertainty profile."""
        w = np.asarray(omega, dtype=float)
        rational = self.beta * np.exp(-1j * self.delay * w) / (self.alpha + 1j * w)
        return np.abs((1.0 / self.mass_ratio - 1.0) + rational)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


class PlantDoubleIntegrator:
    """Single-axis inertia driven by the plant input and a lumped disturbance."""

    def __init__(
        self,
        mass: float,
        sample_time: float,
        modeling_error: Optional[ModelingError] = None,
    ):
        if not (math.isfinite(mass) and mass > 0):
            raise InvalidArgumentError("M must be positive", argument="M", value=mass)
        if not (math.isfinite(sample_time) and sample_time > 0):
            raise InvalidArgumentError(
                "T must be positive", argument="T", value=sample_time
            )
        self.mass = mass
        self.sample_time = sample_time
        self.modeling_error = modeling_error or ModelingError()

        self._delay_steps = rnd(self.modeling_error.delay / sample_time)
        self._decay = math.exp(-self.modeling_error.alpha * sample_time)
        self._input_gain = (
            self.modeling_error.beta * (1.0 - self._decay) / self.modeling_error.alpha
        )
        self._history = DelayLine(self._delay_steps + 1)
        self.reset()

    @property
    def output(self) -> float:
        """Measured position ``y_k``."""
        return self.position

    def step(self, u: float, v: float) -> float:
        """
        Hold ``u`` and the exogenous disturbance ``v`` for one sample.

        Returns:
            Lumped disturbance ``d = (1 + Delta)(u + v) - u`` seen by the
            nominal model during this sample
        """
        applied = u + v
        force = applied / self.modeling_error.mass_ratio + self._dynamic
        self._history.write(applied)
        self._dynamic = self._decay * self._dynamic + self._input_gain * self._history.read(
            self._delay_steps
        )

        T = self.sample_time
        accel = force / self.mass
        self.position += self.velocity * T + 0.5 * accel * T * T
        self.velocity += accel * T
        return force - u

    def reset(self) -> None:
        self.position = 0.0
        self.velocity = 0.0
        self._dynamic = 0.0
        self._history.reset()
