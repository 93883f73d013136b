"""
Disturbance Generators

Periodic (truncated Fourier series), quasiperiodic (Fourier series whose
harmonics drift slowly from cycle to cycle), sinusoidal and constant
disturbance profiles, evaluated vectorized over a time grid.
"""

import math
from typing import List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

# Drift components are drawn in this fraction band of the declared bandwidth.
DRIFT_BAND = (0.1, 0.6)


class DisturbanceProfile(BaseModel):
    """Declarative description of an exogenous disturbance ``v(t)``."""

    model_config = ConfigDict(extra="forbid", allow_inf_nan=False, frozen=True)

    kind: Literal["fourier_periodic", "quasiperiodic_drift", "sinusoid", "constant"]
    period: Optional[float] = Field(None, gt=0, description="Fundamental period L in seconds")
    a: List[float] = Field(
        default_factory=list, description="Cosine coefficients a_0, a_1, ..., a_n"
    )
    b: List[float] = Field(
        default_factory=list, description="Sine coefficients b_1, ..., b_n"
    )
    amplitude: float = Field(0.0, description="Sinusoid amplitude a_v")
    frequency: float = Field(0.0, ge=0, description="Sinusoid frequency omega_v in rad/s")
    value: float = Field(0.0, description="Constant disturbance level")
    drift_depth: float = Field(
        0.2, ge=0, le=1, description="Peak relative amplitude modulation of each harmonic"
    )
    drift_bandwidth: Optional[float] = Field(
        None, gt=0, description="Cycle-domain bandwidth bound rho_gen in rad/s"
    )
    drift_components: int = Field(
        4, ge=1, description="Random sinusoids per harmonic envelope"
    )

    @model_validator(mode="after")
    def _check_kind_fields(self) -> "DisturbanceProfile":
        if self.kind in ("fourier_periodic", "quasiperiodic_drift") and self.period is None:
            raise ValueError(f"{self.kind} requires 'period'")
        if self.kind == "quasiperiodic_drift" and self.drift_bandwidth is None:
            raise ValueError("quasiperiodic_drift requires 'drift_bandwidth'")
        return self

    @property
    def fundamental(self) -> Optional[float]:
        return None if self.period is None else 2.0 * math.pi / self.period

    @property
    def harmonic_orders(self) -> List[int]:
        """Orders ``n >= 1`` with a nonzero Fourier coefficient."""
        top = max(len(self.a) - 1, len(self.b))
        return [n for n in range(1, top + 1) if self._cos(n) != 0.0 or self._sin(n) != 0.0]

    def _cos(self, n: int) -> float:
        return self.a[n] if n < len(self.a) else 0.0

    def _sin(self, n: int) -> float:
        return self.b[n - 1] if 1 <= n <= len(self.b) else 0.0


class DisturbanceGenerator:
    """Seeded evaluator of a :class:`DisturbanceProfile`."""

    def __init__(self, profile: DisturbanceProfile, seed: int = 0):
        self.profile = profile
        self.seed = seed
        self._envelopes = {}
        if profile.kind == "quasiperiodic_drift":
            rng = np.random.default_rng(seed)
            low, high = DRIFT_BAND
            count = profile.drift_components
            for n in profile.harmonic_orders:
                rates = rng.uniform(low, high, count) * profile.drift_bandwidth
                phases = rng.uniform(0.0, 2.0 * math.pi, count)
                self._envelopes[n] = (rates, phases)

    def envelope(self, n: int, t: np.ndarray) -> np.ndarray:
        """Relative amplitude ``1 + m_n(t)`` of harmonic ``n``."""
        t = np.asarray(t, dtype=float)
        if n not in self._envelopes:
            return np.ones_like(t)
        rates, phases = self._envelopes[n]
        # Equal weights keep max|m_n| <= drift_depth.
        modulation = np.sin(np.multiply.outer(t, rates) + phases).mean(axis=-1)
        return 1.0 + self.profile.drift_depth * modulation

    def __call__(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        profile = self.profile

        if profile.kind == "constant":
            return np.full_like(t, profile.value)
        if profile.kind == "sinusoid":
            return profile.amplitude * np.sin(profile.frequency * t)

        omega_0 = profile.fundamental
        d = np.full_like(t, 0.5 * profile.a[0] if profile.a else 0.0)
        for n in profile.harmonic_orders:
            harmonic = profile._cos(n) * np.cos(n * omega_0 * t) + profile._sin(n) * np.sin(
                n * omega_0 * t
            )
            d = d + self.envelope(n, t) * harmonic
        return d


def gen_disturbance(
    profile: DisturbanceProfile, t: np.ndarray, seed: int = 0
) -> np.ndarray:
    """Evaluate ``profile`` on the time grid ``t``."""
    return DisturbanceGenerator(profile, seed)(t)
