"""
Experiment Runner

Builds plants, observers and disturbances from an :class:`ExperimentConfig`
and runs the bode, sweep, simulate, stability and tune-check experiments,
writing CSV/JSON artifacts into the output directory.
"""

import math
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np

from ..analysis.lifted import lifted_spectrum
from ..analysis.stability import check_nominal_stability, check_robust_stability
from ..analysis.sweep import harmonic_amplitudes, measure_gain_sweep
from ..analysis.transfer import (
    FrequencyResponse,
    LoopModel,
    default_grid,
    eval_S,
    eval_stage,
    eval_T_tilde,
    evaluate_response,
)
from ..core.baselines import FirstOrderDob, FourthOrderDob, HighOrderDobConfig
from ..core.filters import stage_summary
from ..core.observer import QdobController, lint_config
from ..sim.disturbances import DisturbanceGenerator
from ..sim.outer import OuterPdController
from ..sim.plant import PlantDoubleIntegrator
from ..sim.reports import (
    save_frequency_response_csv,
    save_json,
    save_trace_csv,
    write_csv_rows,
)
from ..sim.simulator import Observer, SimTrace, run_closed_loop
from ..utils.errors import ConfigValidationError, InsufficientDataError
from ..utils.logging import get_logger
from ..utils.telemetry import get_tracer
from .schema import (
    ExperimentConfig,
    parse_experiment_config,
    save_experiment_config,
    starter_config,
)

logger = get_logger(__name__)
tracer = get_tracer(__name__)

PathLike = Union[str, Path]

BODE_RESPONSES = ("phi", "q", "periodic_pass", "b", "open_loop", "s", "t")


def build_model(cfg: ExperimentConfig) -> LoopModel:
    """Analysis model of the configured QDOB."""
    if cfg.controller.qdob is None:
        raise ConfigValidationError(
            "this command needs a 'controller.qdob' section",
            failing_keys=["controller.qdob"],
        )
    return LoopModel.from_config(cfg.controller.qdob)


def build_plant(cfg: ExperimentConfig) -> PlantDoubleIntegrator:
    return PlantDoubleIntegrator(
        cfg.plant.mass, cfg.plant.sample_time, cfg.plant.modeling_error()
    )


def build_observer(cfg: ExperimentConfig) -> Optional[Observer]:
    controller = cfg.controller
    if controller.kind == "qdob":
        return QdobController(controller.qdob)
    if controller.kind == "dob1":
        return FirstOrderDob(controller.dob_cutoff, cfg.plant.mass, cfg.plant.sample_time)
    if controller.kind == "dob4":
        return FourthOrderDob(
            HighOrderDobConfig(
                cutoff=controller.dob_cutoff,
                mass=cfg.plant.mass,
                sample_time=cfg.plant.sample_time,
            )
        )
    return None


def build_outer(cfg: ExperimentConfig) -> Optional[OuterPdController]:
    if cfg.outer is None:
        return None
    return OuterPdController(
        kp=cfg.outer.kp,
        kd=cfg.outer.kd,
        mass_ff=cfg.outer.mass_ff,
        cutoff=cfg.outer.cutoff,
        sample_time=cfg.plant.sample_time,
    )


def build_disturbance(cfg: ExperimentConfig) -> DisturbanceGenerator:
    return DisturbanceGenerator(cfg.disturbance, seed=cfg.seed)


def analytic_sensitivity(cfg: ExperimentConfig, omega: np.ndarray) -> np.ndarray:
    """Nominal ``S(j omega)`` of the configured observer (1 without one)."""
    w = np.asarray(omega, dtype=float)
    if cfg.controller.kind == "qdob":
        return eval_S(build_model(cfg), w)
    observer = build_observer(cfg)
    if observer is None:
        return np.ones_like(w, dtype=complex)
    return observer.sensitivity(w)


def plant_response(mass: float, omega: np.ndarray) -> np.ndarray:
    """``P_n(j omega) = 1/(M (j omega)^2)``."""
    return -1.0 / (mass * np.asarray(omega, dtype=float) ** 2)


def _analysis_grid(
    cfg: ExperimentConfig, model: LoopModel, grid_points: Optional[int]
) -> np.ndarray:
    spec = cfg.analysis.grid
    return default_grid(
        model,
        points_per_decade=grid_points or spec.points_per_decade,
        start=spec.start,
        stop=spec.stop,
        include_harmonics=spec.include_harmonics,
    )


def cmd_bode(
    cfg: ExperimentConfig, out_dir: PathLike, grid_points: Optional[int] = None
) -> List[Path]:
    """Write ``Phi``, per-stage, Q, periodic-pass, B, Gamma, S, T and |T~| responses."""
    out = Path(out_dir)
    with tracer.start_as_current_span("qdob.bode") as span:
        model = build_model(cfg)
        grid = _analysis_grid(cfg, model, grid_points)
        span.set_attribute("qdob.grid_points", int(grid.size))
        span.set_attribute("qdob.output", str(out))

        files = [
            save_frequency_response_csv(evaluate_response(model, name, grid), out / f"{name}.csv")
            for name in BODE_RESPONSES
        ]
        for i, stage in enumerate(model.plan.stages, start=1):
            response = FrequencyResponse(
                omega=grid,
                values=eval_stage(stage, model.sample_time, grid),
                label=f"phi_stage_{i}",
            )
            files.append(save_frequency_response_csv(response, out / f"phi_stage_{i}.csv"))

        gain = eval_T_tilde(model, grid)
        with np.errstate(divide="ignore"):
            gain_db = 20.0 * np.log10(gain)
        files.append(
            write_csv_rows(
                out / "t_tilde.csv",
                ("omega", "gain", "gain_db"),
                zip(grid.tolist(), gain.tolist(), gain_db.tolist()),
            )
        )
        files.append(
            save_json(
                {
                    "omega_c": model.omega_c,
                    "loop_gain": model.loop_gain,
                    "plan": model.plan.to_dict(),
                    "stages": stage_summary(model.plan.stages),
                    "grid_points": int(grid.size),
                    "files": [p.name for p in files],
                },
                out / "bode.json",
            )
        )
        return files


def cmd_sweep(cfg: ExperimentConfig, out_dir: PathLike) -> List[Path]:
    """
    Measure the disturbance-to-output gain of the simulated observer loop
    and compare it with ``P_n S``. The outer loop is left out so the
    measurement isolates the observer.
    """
    out = Path(out_dir)
    sweep = cfg.analysis.sweep
    omegas = sweep.frequencies()

    with tracer.start_as_current_span("qdob.sweep") as span:
        span.set_attribute("qdob.controller", cfg.controller.kind)
        span.set_attribute("qdob.frequencies", int(omegas.size))

        def system(injection: np.ndarray) -> np.ndarray:
            trace = run_closed_loop(
                build_plant(cfg),
                injection,
                sweep.duration,
                observer=build_observer(cfg),
                period=cfg.period,
                label=cfg.controller.kind,
            )
            return trace.y

        measured = measure_gain_sweep(
            system,
            omegas,
            sweep.amplitude,
            sweep.duration,
            sweep.transient_cut,
            cfg.plant.sample_time,
            label=f"{cfg.controller.kind}_d_to_y",
        )
        analytic = plant_response(cfg.plant.mass, measured.omega) * analytic_sensitivity(
            cfg, measured.omega
        )
        analytic_db = 20.0 * np.log10(np.abs(analytic))
        deviation = measured.magnitude_db() - analytic_db

        rows = zip(
            measured.omega.tolist(),
            measured.values.real.tolist(),
            measured.values.imag.tolist(),
            measured.magnitude_db().tolist(),
            measured.phase_deg().tolist(),
            analytic_db.tolist(),
            deviation.tolist(),
        )
        files = [
            write_csv_rows(
                out / "sweep.csv",
                ("omega", "re", "im", "mag_db", "phase_deg", "analytic_db", "deviation_db"),
                rows,
            ),
            save_json(
                {
                    "controller": cfg.controller.kind,
                    "points": int(measured.omega.size),
                    "max_abs_deviation_db": float(np.max(np.abs(deviation))),
                    **measured.metadata,
                },
                out / "sweep.json",
            ),
        ]
        return files


def summarize_trace(cfg: ExperimentConfig, trace: SimTrace) -> Dict[str, Any]:
    """RMS before and after settling plus per-harmonic attenuation."""
    period = cfg.period
    settle = cfg.analysis.settle_cycles * period if period else 0.0
    before = slice(0, trace.window(settle).start)

    summary: Dict[str, Any] = {
        "controller": cfg.controller.kind,
        "seed": cfg.seed,
        "samples": len(trace),
        "settle_time": settle,
        "rms_error": trace.rms("e"),
        "rms_error_settling": float(np.sqrt(np.mean(trace.e[before] ** 2))) if before.stop else 0.0,
        "rms_error_settled": trace.rms("e", settle),
        "rms_output_settled": trace.rms("y", settle),
    }

    if period:
        omega_0 = 2.0 * math.pi / period
        orders = cfg.analysis.harmonics or cfg.disturbance.harmonic_orders
        start = trace.window(settle).start
        try:
            y_amp = harmonic_amplitudes(trace.y, omega_0, trace.sample_time, orders, start)
            d_amp = harmonic_amplitudes(trace.d, omega_0, trace.sample_time, orders, start)
        except InsufficientDataError as e:
            logger.warning(f"harmonic summary skipped: {e.message}")
        else:
            harmonics = {}
            for n in orders:
                open_loop = d_amp[n] * abs(plant_response(cfg.plant.mass, n * omega_0))
                harmonics[str(n)] = {
                    "omega": n * omega_0,
                    "output_amplitude": y_amp[n],
                    "disturbance_amplitude": d_amp[n],
                    "attenuation_db": (
                        20.0 * math.log10(y_amp[n] / open_loop)
                        if y_amp[n] > 0 and open_loop > 0
                        else None
                    ),
                }
            summary["harmonics"] = harmonics

        rho = cfg.disturbance.drift_bandwidth or (
            cfg.controller.qdob.rho if cfg.controller.qdob else None
        )
        try:
            spectrum = lifted_spectrum(trace.d, period, trace.sample_time, rho=rho)
        except InsufficientDataError as e:
            logger.warning(f"lifted spectrum skipped: {e.message}")
        else:
            summary["lifted_disturbance"] = {
                "cycles": spectrum.cycles,
                "rho": rho,
                "energy_above_rho": spectrum.energy_above(rho) if rho else None,
            }
    return summary


def cmd_simulate(cfg: ExperimentConfig, out_dir: PathLike) -> List[Path]:
    """Run the configured loop and write ``trace.csv`` and ``simulate.json``."""
    out = Path(out_dir)
    with tracer.start_as_current_span("qdob.simulate") as span:
        span.set_attribute("qdob.controller", cfg.controller.kind)
        span.set_attribute("qdob.seed", cfg.seed)

        outer = build_outer(cfg)
        trace = run_closed_loop(
            build_plant(cfg),
            build_disturbance(cfg),
            cfg.analysis.duration,
            observer=build_observer(cfg),
            outer=outer,
            command=cfg.outer.command_function() if cfg.outer else None,
            period=cfg.period,
            label=cfg.controller.kind,
            metadata={"name": cfg.name, "seed": cfg.seed},
        )
        summary = summarize_trace(cfg, trace)
        span.set_attribute("qdob.rms_error_settled", summary["rms_error_settled"])
        return [
            save_trace_csv(trace, out / "trace.csv"),
            save_json(summary, out / "simulate.json"),
        ]


def cmd_stability(
    cfg: ExperimentConfig, out_dir: PathLike, grid_points: Optional[int] = None
) -> Dict[str, Any]:
    """
    Nominal phase-corridor and robust small-gain checks. The uncertainty is
    the plant's modeling-error gain when one is configured, else the constant
    ``analysis.robust_uncertainty``.
    """
    out = Path(out_dir)
    with tracer.start_as_current_span("qdob.stability") as span:
        model = build_model(cfg)
        grid = _analysis_grid(cfg, model, grid_points)
        modeling_error = cfg.plant.modeling_error()
        uncertainty = (
            cfg.analysis.robust_uncertainty
            if modeling_error.is_nominal
            else modeling_error.gain
        )

        nominal = check_nominal_stability(model, grid)
        robust = check_robust_stability(model, uncertainty, grid)
        span.set_attribute("qdob.nominal_passed", nominal.passed)
        span.set_attribute("qdob.robust_passed", robust.passed)

        result = {"nominal": nominal.to_dict(), "robust": robust.to_dict()}
        save_json(result, out / "stability.json")
        return {"nominal": nominal, "robust": robust}


def cmd_tune_check(cfg: ExperimentConfig, out_dir: PathLike) -> List[Dict[str, Any]]:
    """Run the tuning lints and write ``tune_check.json``."""
    out = Path(out_dir)
    with tracer.start_as_current_span("qdob.tune_check") as span:
        if cfg.controller.qdob is None:
            raise ConfigValidationError(
                "tune-check needs a 'controller.qdob' section",
                failing_keys=["controller.qdob"],
            )
        harmonics = cfg.analysis.harmonics or cfg.disturbance.harmonic_orders
        findings = [f.to_dict() for f in lint_config(cfg.controller.qdob, harmonics)]
        errors = sum(1 for f in findings if f["severity"] == "error")
        span.set_attribute("qdob.lint_errors", errors)
        save_json(
            {"errors": errors, "warnings": len(findings) - errors, "findings": findings},
            out / "tune_check.json",
        )
        return findings


def cmd_init(path: PathLike) -> Path:
    """Write the validated starter config."""
    return save_experiment_config(parse_experiment_config(starter_config()), path)
