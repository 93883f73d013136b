"""Frequency-domain analysis: transfer functions, stability, lifted spectra, sweeps."""

from .lifted import LiftedSpectrum, lifted_spectrum
from .stability import StabilityReport, check_nominal_stability, check_robust_stability
from .sweep import goertzel, harmonic_amplitudes, measure_gain_sweep, sinusoid_phasor
from .transfer import (
    FrequencyResponse,
    LoopModel,
    default_grid,
    eval_B,
    eval_open_loop,
    eval_periodic_pass,
    eval_phi,
    eval_Q,
    eval_S,
    eval_S_approx,
    eval_stage,
    eval_T,
    eval_T_approx,
    eval_T_tilde,
    harmonic_sweep_grid,
    log_sweep_grid,
    open_loop_phase,
)

__all__ = [
    "FrequencyResponse",
    "LiftedSpectrum",
    "LoopModel",
    "StabilityReport",
    "check_nominal_stability",
    "check_robust_stability",
    "default_grid",
    "eval_B",
    "eval_open_loop",
    "eval_periodic_pass",
    "eval_phi",
    "eval_Q",
    "eval_S",
    "eval_S_approx",
    "eval_stage",
    "eval_T",
    "eval_T_approx",
    "eval_T_tilde",
    "goertzel",
    "harmonic_amplitudes",
    "harmonic_sweep_grid",
    "lifted_spectrum",
    "log_sweep_grid",
    "measure_gain_sweep",
    "open_loop_phase",
    "sinusoid_phasor",
]
