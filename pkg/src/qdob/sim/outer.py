"""
Outer Position Loop

Proportional-and-derivative control with acceleration feedforward from a
critically damped command filter. Both pseudo-differentiators share the
cutoff ``G`` and are discretized by backward Euler.
"""

import math
from dataclasses import dataclass, field

from ..utils.errors import InvalidArgumentError


@dataclass
class OuterPdController:
    """
    ``r = K_p e + K_d edot_hat + M_ff * thetaddot_hat_cmd`` with
    ``edot_hat = G (e - e_hat)``.
    """

    kp: float
    kd: float
    mass_ff: float
    cutoff: float
    sample_time: float

    filtered_error: float = field(default=0.0, init=False)
    command_position: float = field(default=0.0, init=False)
    command_velocity: float = field(default=0.0, init=False)

    def __post_init__(self):
        for name in ("kp", "kd", "mass_ff"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise InvalidArgumentError(
                    f"{name} must be non-negative", argument=name, value=value
                )
        for name in ("cutoff", "sample_time"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise InvalidArgumentError(
                    f"{name} must be positive", argument=name, value=value
                )

    def step(self, command: float, y: float) -> float:
        G = self.cutoff
        T = self.sample_time

        e = command - y
        self.filtered_error = (self.filtered_error + G * T * e) / (1.0 + G * T)
        error_rate = G * (e - self.filtered_error)

        previous_velocity = self.command_velocity
        self.command_velocity = (
            previous_velocity + T * G * G * (command - self.command_position)
        ) / (1.0 + G * T) ** 2
        self.command_position += T * self.command_velocity
        command_accel = (self.command_velocity - previous_velocity) / T

        return self.kp * e + self.kd * error_rate + self.mass_ff * command_accel

    def reset(self) -> None:
        self.filtered_error = 0.0
        self.command_position = 0.0
        self.command_velocity = 0.0


def outer_pd_step(ctrl: OuterPdController, command: float, y: float) -> float:
    return ctrl.step(command, y)
