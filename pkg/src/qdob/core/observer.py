"""
QDOB Observer Module

Hyperparameters, preliminary computations and the real-time step of the
quasiperiodic disturbance observer for a ``1/(M s^2)`` plant model.
"""

import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Literal, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field

from ..utils.errors import (
    AliasingConfigError,
    DomainError,
    InvalidArgumentError,
    NumericFaultError,
    PlanInfeasibleError,
)
from ..utils.logging import get_logger, log_lint_finding
from .filters import (
    DelayLine,
    InversePlantState,
    MultistageFilter,
    MultistagePlan,
    inverse_plant_step,
    plan_multistage,
)

logger = get_logger(__name__)

# omega_b below this multiple of omega_a triggers the tuning warning.
BANDWIDTH_SEPARATION = 5.0


class QdobConfig(BaseModel):
    """Hyperparameters of the quasiperiodic disturbance observer."""

    model_config = ConfigDict(extra="forbid", allow_inf_nan=False, frozen=True)

    mu: Literal[0, 1] = Field(
        1, description="0 for pure estimation, 1 for compensation (u = r - dhat)"
    )
    stages: int = Field(3, ge=1, description="Number of FIR stages l")
    order_max: int = Field(256, ge=1, description="Upper bound N_max on the stage order")
    omega_a: float = Field(..., gt=0, description="Low-pass cutoff of Phi in rad/s")
    omega_b: float = Field(..., gt=0, description="Inverse-plant low-pass cutoff in rad/s")
    rho: float = Field(..., gt=0, description="Separation frequency in rad/s")
    period: float = Field(..., gt=0, description="Disturbance period L in seconds")
    mass: float = Field(..., gt=0, description="Nominal plant inertia M")
    sample_time: float = Field(..., gt=0, description="Controller sampling time T in seconds")

    @property
    def fundamental(self) -> float:
        """Fundamental frequency 2*pi/L in rad/s."""
        return 2.0 * math.pi / self.period


def compute_omega_c(rho: float, L: float) -> float:
    """
    Cutoff of the cycle-domain low-pass that places the -3 dB harmonic
    suppression edges at ``n*omega_0 +- rho``.

    Raises:
        InvalidArgumentError: Non-positive or non-finite period
        DomainError: rho outside [0, pi/L)
    """
    if not math.isfinite(L) or L <= 0:
        raise InvalidArgumentError(
            f"L must be positive and finite, got {L!r}", argument="L", value=L
        )
    if not math.isfinite(rho) or rho < 0:
        raise DomainError(
            f"rho must be finite and non-negative, got {rho!r}",
            invariant="rho_non_negative",
        )
    if rho * L >= math.pi:
        raise DomainError(
            f"rho={rho:.6g} rad/s must stay below pi/L={math.pi / L:.6g} rad/s",
            invariant="rho_below_pi_over_L",
            details={"rho": rho, "limit": math.pi / L},
        )
    return 2.0 / L * math.tan(L * rho / 2.0)


@dataclass
class LintFinding:
    """One hyperparameter tuning finding."""

    invariant: str
    severity: Literal["error", "warning"]
    message: str

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def lint_config(
    cfg: QdobConfig, harmonics: Optional[Sequence[int]] = None
) -> List[LintFinding]:
    """
    Check the tuning guide: ``omega_0, 2*omega_0, ... < omega_a << omega_b``,
    ``rho < pi/L`` and a feasible cascade.

    Args:
        cfg: Observer hyperparameters
        harmonics: Harmonic orders expected in the disturbance; defaults to
            the fundamental only

    Returns:
        Findings ordered as checked; an empty list means a clean config
    """
    findings: List[LintFinding] = []

    try:
        compute_omega_c(cfg.rho, cfg.period)
    except DomainError as e:
        findings.append(
            LintFinding(e.invariant or "rho_below_pi_over_L", "error", e.message)
        )

    try:
        plan_multistage(
            cfg.sample_time, cfg.period, cfg.omega_a, cfg.stages, cfg.order_max
        )
    except PlanInfeasibleError as e:
        findings.append(LintFinding("plan_feasible", "error", e.message))
    except AliasingConfigError as e:
        findings.append(LintFinding("stage_below_nyquist", "error", e.message))

    orders = list(harmonics) if harmonics else [1]
    above = [n for n in orders if n * cfg.fundamental >= cfg.omega_a]
    if above:
        findings.append(
            LintFinding(
                "harmonics_below_omega_a",
                "warning",
                f"harmonics {above} of omega_0={cfg.fundamental:.6g} rad/s are not "
                f"below omega_a={cfg.omega_a:.6g} rad/s and will not be suppressed",
            )
        )

    if cfg.omega_b < BANDWIDTH_SEPARATION * cfg.omega_a:
        findings.append(
            LintFinding(
                "omega_a_much_less_than_omega_b",
                "warning",
                f"omega_b={cfg.omega_b:.6g} rad/s is less than "
                f"{BANDWIDTH_SEPARATION:g}*omega_a={BANDWIDTH_SEPARATION * cfg.omega_a:.6g} rad/s",
            )
        )

    return findings


class QdobController:
    """
    Real-time QDOB.

    Each :meth:`step` consumes the inner reference ``r_k`` and the measured
    output ``y_k`` and returns the plant input ``u_k`` with the estimate
    ``dhat_k``. One instance per controlled axis; not thread-safe.
    """

    def __init__(self, config: QdobConfig):
        self.config = config
        self.omega_c = compute_omega_c(config.rho, config.period)
        self.plan: MultistagePlan = plan_multistage(
            config.sample_time,
            config.period,
            config.omega_a,
            config.stages,
            config.order_max,
        )

        wcl = self.omega_c * config.period
        denominator = (1 - config.mu) * wcl + 2.0
        self.input_gain = wcl / denominator
        self.feedback_gain = ((1 - config.mu) * wcl - 2.0) / denominator

        self._cascade = MultistageFilter(self.plan)
        self._lambda = DelayLine(self._cascade.history_capacity)
        self._inverse = InversePlantState()
        self.step_index = 0

        for finding in lint_config(config):
            if finding.severity == "warning":
                log_lint_finding(
                    logger, finding.invariant, finding.severity, finding.message
                )

    @property
    def sample_time(self) -> float:
        return self.config.sample_time

    @property
    def mu(self) -> int:
        return self.config.mu

    def step(self, r: float, y: float) -> Tuple[float, float]:
        """
        Advance one sample.

        Raises:
            NumericFaultError: A non-finite input or intermediate value; the
                error names the stage that produced it
        """
        if not math.isfinite(r):
            raise NumericFaultError(
                f"non-finite reference {r!r}",
                stage="reference",
                step_index=self.step_index,
            )

        try:
            xi = inverse_plant_step(
                self._inverse,
                y,
                self.config.mass,
                self.config.omega_b,
                self.config.sample_time,
            )
        except NumericFaultError as e:
            e.step_index = self.step_index
            raise

        innovation = self.input_gain * (xi - r)
        periodic = self._cascade.apply(self._lambda)
        if not math.isfinite(periodic):
            raise NumericFaultError(
                "multistage filter output is not finite",
                stage="multistage_filter",
                step_index=self.step_index,
            )

        dhat = innovation + periodic
        lam = innovation - self.feedback_gain * dhat
        if not (math.isfinite(dhat) and math.isfinite(lam)):
            raise NumericFaultError(
                "periodic-pass recursion is not finite",
                stage="periodic_pass",
                step_index=self.step_index,
            )

        self._lambda.write(lam)
        self.step_index += 1
        return r - self.config.mu * dhat, dhat

    def reset(self) -> None:
        """Zero every buffer and history."""
        self._cascade.reset()
        self._lambda.reset()
        self._inverse.reset()
        self.step_index = 0


def new_controller(cfg: QdobConfig) -> QdobController:
    """Build a zero-state controller from validated hyperparameters."""
    return QdobController(cfg)
