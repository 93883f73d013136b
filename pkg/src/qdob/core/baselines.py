"""
Baseline Disturbance Observers

Classical first-order and binomial fourth-order disturbance observers for
the ``1/(M s^2)`` plant model, discretized by backward Euler the same way as
the QDOB inverse-plant path.
"""

import math
from typing import Literal, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as P
from pydantic import BaseModel, ConfigDict, Field
from scipy.signal import cont2discrete

from ..utils.errors import InvalidArgumentError, NumericFaultError


def backward_euler(
    num: Sequence[float], den: Sequence[float], T: float
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Substitute ``s <- (1 - z^-1)/T`` into ``num(s)/den(s)``.

    The strictly proper part goes through ``cont2discrete``; the polynomial
    quotient of an improper ``num/den`` maps term by term.

    Args:
        num: Numerator coefficients, highest power of s first
        den: Denominator coefficients, highest power of s first
        T: Sampling time in seconds

    Returns:
        ``(b, a)`` in ascending powers of ``z^-1`` with ``a[0] == 1``
    """
    num_arr = np.trim_zeros(np.atleast_1d(np.asarray(num, dtype=float)), "f")
    den_arr = np.trim_zeros(np.atleast_1d(np.asarray(den, dtype=float)), "f")
    if den_arr.size == 0:
        raise InvalidArgumentError("denominator must not vanish", argument="den")
    if num_arr.size == 0:
        return np.zeros(1), np.ones(1)

    quotient, remainder = np.polydiv(num_arr, den_arr)
    if den_arr.size == 1 or not np.any(remainder):
        b_dyn, a = np.zeros(1), np.ones(1)
    else:
        numd, dend, _ = cont2discrete((remainder, den_arr), T, method="backward_diff")
        b_dyn = np.ravel(numd)
        a = np.asarray(dend, dtype=float)

    poly = np.zeros(1)
    for power, coeff in enumerate(np.atleast_1d(quotient)[::-1]):
        poly = P.polyadd(poly, coeff * P.polypow([1.0, -1.0], power) / T**power)
    b = P.polyadd(P.polymul(poly, a), b_dyn)
    return b / a[0], a / a[0]


class DiscreteFilter:
    """Transposed direct-form II realization of ``b(z^-1)/a(z^-1)``."""

    def __init__(self, b: np.ndarray, a: np.ndarray):
        size = max(len(a), len(b))
        self.b = np.zeros(size)
        self.a = np.zeros(size)
        self.b[: len(b)] = b
        self.a[: len(a)] = a
        self._state = np.zeros(size - 1)

    @property
    def feedthrough(self) -> float:
        return float(self.b[0])

    @property
    def pending(self) -> float:
        """Output contribution of past samples for the current step."""
        return float(self._state[0]) if self._state.size else 0.0

    def commit(self, x: float) -> float:
        y = self.feedthrough * x + self.pending
        if self._state.size:
            update = self.b[1:] * x - self.a[1:] * y
            update[:-1] += self._state[1:]
            self._state = update
        return y

    def response(self, omega: np.ndarray, T: float) -> np.ndarray:
        """Frequency response on the unit circle at ``z = exp(j omega T)``."""
        q = np.exp(-1j * np.asarray(omega, dtype=float) * T)
        return P.polyval(q, self.b) / P.polyval(q, self.a)

    def reset(self) -> None:
        self._state[:] = 0.0


class HighOrderDobConfig(BaseModel):
    """Binomial fourth-order Q-filter ``(c2 s^2 + c1 s + c0)/(s + g)^4``."""

    model_config = ConfigDict(extra="forbid", allow_inf_nan=False, frozen=True)

    order: Literal[4] = Field(4, description="Denominator order (fixed)")
    cutoff: float = Field(..., gt=0, description="Cutoff g in rad/s")
    mass: float = Field(..., gt=0, description="Nominal plant inertia M")
    sample_time: float = Field(..., gt=0, description="Sampling time T in seconds")

    @property
    def coefficients(self) -> Tuple[float, float, float]:
        """``(c0, c1, c2)`` with ``c_i = 4!/((4-i)! i!) g^(4-i)``."""
        g = self.cutoff
        return tuple(math.comb(self.order, i) * g ** (self.order - i) for i in range(3))


class DisturbanceObserver:
    """
    Disturbance observer ``dhat = Q (P_n^-1 y - u)`` with compensation
    ``u = r - mu * dhat``. The algebraic loop through the feedthrough of the
    discrete Q is solved exactly each step.
    """

    def __init__(
        self,
        q_num: Sequence[float],
        q_den: Sequence[float],
        mass: float,
        sample_time: float,
        mu: int = 1,
        label: str = "dob",
    ):
        if not (math.isfinite(mass) and mass > 0):
            raise InvalidArgumentError("mass must be positive", argument="M", value=mass)
        if not (math.isfinite(sample_time) and sample_time > 0):
            raise InvalidArgumentError(
                "sampling time must be positive", argument="T", value=sample_time
            )
        self.q_num = np.asarray(q_num, dtype=float)
        self.q_den = np.asarray(q_den, dtype=float)
        self.mass = mass
        self.sample_time = sample_time
        self.mu = mu
        self.label = label

        inverse_num = mass * np.polymul(self.q_num, [1.0, 0.0, 0.0])
        self._inverse = DiscreteFilter(
            *backward_euler(inverse_num, self.q_den, sample_time)
        )
        self._q = DiscreteFilter(*backward_euler(self.q_num, self.q_den, sample_time))
        self.step_index = 0

    def step(self, r: float, y: float) -> Tuple[float, float]:
        if not (math.isfinite(r) and math.isfinite(y)):
            raise NumericFaultError(
                f"non-finite input r={r!r}, y={y!r}",
                stage="input",
                step_index=self.step_index,
            )
        estimate = self._inverse.commit(y) - self._q.pending
        q0 = self._q.feedthrough
        if self.mu:
            dhat = (estimate - q0 * r) / (1.0 - q0)
        else:
            dhat = estimate - q0 * r
        u = r - self.mu * dhat
        self._q.commit(u)
        if not (math.isfinite(dhat) and math.isfinite(u)):
            raise NumericFaultError(
                f"{self.label} estimate is not finite",
                stage=self.label,
                step_index=self.step_index,
            )
        self.step_index += 1
        return u, dhat

    def q_response(self, omega: np.ndarray) -> np.ndarray:
        """Continuous-time ``Q(j omega)``."""
        s = 1j * np.asarray(omega, dtype=float)
        return np.polyval(self.q_num, s) / np.polyval(self.q_den, s)

    def sensitivity(self, omega: np.ndarray) -> np.ndarray:
        """Nominal disturbance sensitivity ``1 - Q(j omega)``."""
        return 1.0 - self.q_response(omega)

    def reset(self) -> None:
        self._inverse.reset()
        self._q.reset()
        self.step_index = 0


class FirstOrderDob(DisturbanceObserver):
    """Observer with ``Q = g/(s + g)``."""

    def __init__(self, cutoff: float, mass: float, sample_time: float, mu: int = 1):
        if not (math.isfinite(cutoff) and cutoff > 0):
            raise InvalidArgumentError(
                "cutoff must be positive", argument="g", value=cutoff
            )
        self.cutoff = cutoff
        super().__init__([cutoff], [1.0, cutoff], mass, sample_time, mu, label="dob1")


class FourthOrderDob(DisturbanceObserver):
    """Observer with the binomial fourth-order Q-filter."""

    def __init__(self, config: HighOrderDobConfig, mu: int = 1):
        self.config = config
        c0, c1, c2 = config.coefficients
        denominator = np.poly([-config.cutoff] * config.order)
        super().__init__(
            [c2, c1, c0],
            denominator,
            config.mass,
            config.sample_time,
            mu,
            label="dob4",
        )


def fourth_order_dob_step(
    state: FourthOrderDob, r: float, y: float
) -> Tuple[float, float]:
    return state.step(r, y)


def first_order_dob_step(
    state: FirstOrderDob, r: float, y: float
) -> Tuple[float, float]:
    return state.step(r, y)
