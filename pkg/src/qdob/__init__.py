"""
qdob: Quasiperiodic Disturbance Observer

Filter design, real-time stepping and frequency-domain verification of a
disturbance observer whose Q-filter passes slowly drifting periodic
disturbances and rejects everything else.

Key Features:
- Multistage linear-phase FIR low-pass design with delay compensation
- Sample-by-sample QDOB controller with a bounded-memory history
- Double-integrator plant, outer PD loop and baseline DOBs for comparison
- Sensitivity, open-loop phase and small-gain robustness analysis
- Lifted cycle-domain spectra and sine-sweep gain measurement

Example:
    from qdob import QdobConfig, new_controller

    cfg = QdobConfig(omega_a=50, omega_b=100, rho=2, period=1.2566,
                     mass=0.005613, sample_time=1e-3)
    controller = new_controller(cfg)
    u, dhat = controller.step(r, y)
"""

__version__ = "0.1.0"

from .analysis.lifted import LiftedSpectrum, lifted_spectrum
from .analysis.stability import StabilityReport, check_nominal_stability, check_robust_stability
from .analysis.sweep import measure_gain_sweep
from .analysis.transfer import FrequencyResponse, LoopModel, eval_Q, eval_S, eval_T
from .core.baselines import FirstOrderDob, FourthOrderDob
from .core.filters import MultistagePlan, design_fir_stage, plan_multistage
from .core.observer import QdobConfig, QdobController, compute_omega_c, new_controller
from .sim.disturbances import DisturbanceProfile, gen_disturbance
from .sim.plant import PlantDoubleIntegrator
from .sim.simulator import SimTrace, run_closed_loop
from .utils.errors import (
    AliasingConfigError,
    ArtifactIOError,
    ConfigValidationError,
    DomainError,
    InsufficientDataError,
    InvalidArgumentError,
    NumericFaultError,
    PlanInfeasibleError,
    QdobError,
)

__all__ = [
    # Filter design and the controller
    "QdobConfig",
    "QdobController",
    "new_controller",
    "compute_omega_c",
    "MultistagePlan",
    "plan_multistage",
    "design_fir_stage",
    "FirstOrderDob",
    "FourthOrderDob",
    # Simulation
    "PlantDoubleIntegrator",
    "DisturbanceProfile",
    "gen_disturbance",
    "SimTrace",
    "run_closed_loop",
    # Analysis
    "LoopModel",
    "FrequencyResponse",
    "eval_Q",
    "eval_S",
    "eval_T",
    "StabilityReport",
    "check_nominal_stability",
    "check_robust_stability",
    "LiftedSpectrum",
    "lifted_spectrum",
    "measure_gain_sweep",
    # Error types
    "QdobError",
    "InvalidArgumentError",
    "AliasingConfigError",
    "PlanInfeasibleError",
    "DomainError",
    "NumericFaultError",
    "InsufficientDataError",
    "ConfigValidationError",
    "ArtifactIOError",
    # Version
    "__version__",
]
