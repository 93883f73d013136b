"""Core filters, the QDOB controller and baseline observers."""

from .baselines import (
    DisturbanceObserver,
    FirstOrderDob,
    FourthOrderDob,
    HighOrderDobConfig,
    first_order_dob_step,
    fourth_order_dob_step,
)
from .filters import (
    DelayLine,
    FirStage,
    MultistageFilter,
    MultistagePlan,
    design_fir_stage,
    inverse_plant_step,
    multistage_apply,
    plan_multistage,
    rnd,
)
from .observer import (
    LintFinding,
    QdobConfig,
    QdobController,
    compute_omega_c,
    lint_config,
    new_controller,
)

__all__ = [
    "DelayLine",
    "DisturbanceObserver",
    "FirStage",
    "FirstOrderDob",
    "FourthOrderDob",
    "HighOrderDobConfig",
    "LintFinding",
    "MultistageFilter",
    "MultistagePlan",
    "QdobConfig",
    "QdobController",
    "compute_omega_c",
    "design_fir_stage",
    "first_order_dob_step",
    "fourth_order_dob_step",
    "inverse_plant_step",
    "lint_config",
    "multistage_apply",
    "new_controller",
    "plan_multistage",
    "rnd",
]
