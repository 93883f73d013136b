"""
Experiment Configuration Schema

One YAML document per experiment, validated by pydantic before anything
runs. Unknown keys are rejected and every failing key is reported.
"""

from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from ..analysis.transfer import log_sweep_grid
from ..core.observer import QdobConfig
from ..sim.disturbances import DisturbanceProfile
from ..sim.plant import ModelingError
from ..utils.errors import ArtifactIOError, ConfigValidationError


class _Spec(BaseModel):
    model_config = ConfigDict(extra="forbid", allow_inf_nan=False)


class ControllerSpec(_Spec):
    """Observer selection and its parameters."""

    kind: Literal["qdob", "dob1", "dob4", "none"] = Field(..., description="Observer type")
    qdob: Optional[QdobConfig] = Field(None, description="QDOB hyperparameters")
    dob_cutoff: float = Field(50.0, gt=0, description="Baseline Q-filter cutoff g in rad/s")

    @model_validator(mode="after")
    def _require_qdob(self) -> "ControllerSpec":
        if self.kind == "qdob" and self.qdob is None:
            raise ValueError("kind 'qdob' requires the 'qdob' section")
        return self


class PlantSpec(_Spec):
    """Double-integrator plant and optional modeling error."""

    mass: float = Field(..., gt=0, description="Nominal inertia M")
    sample_time: float = Field(..., gt=0, description="Sampling time T in seconds")
    mass_ratio: float = Field(1.0, gt=0, description="True over nominal inertia")
    delta_beta: float = Field(0.0, description="Gain of the first-order uncertainty term")
    delta_alpha: float = Field(1.0, gt=0, description="Pole of the first-order uncertainty term")
    delta_delay: float = Field(0.0, ge=0, description="Delay of the uncertainty term in seconds")

    def modeling_error(self) -> ModelingError:
        return ModelingError(
            mass_ratio=self.mass_ratio,
            beta=self.delta_beta,
            alpha=self.delta_alpha,
            delay=self.delta_delay,
        )


class OuterPdSpec(_Spec):
    """Outer PD loop with command-filter feedforward."""

    kp: float = Field(..., ge=0, description="Proportional gain K_p")
    kd: float = Field(..., ge=0, description="Derivative gain K_d")
    mass_ff: float = Field(0.0, ge=0, description="Feedforward inertia")
    cutoff: float = Field(..., gt=0, description="Pseudo-differentiation cutoff G in rad/s")
    command: Literal["zero", "step", "sine"] = Field("zero", description="Position command")
    command_amplitude: float = Field(0.0, description="Command amplitude")
    command_frequency: float = Field(0.0, ge=0, description="Sine command frequency in rad/s")

    def command_function(self):
        amplitude = self.command_amplitude
        if self.command == "step":
            return lambda t: np.full_like(t, amplitude)
        if self.command == "sine":
            frequency = self.command_frequency
            return lambda t: amplitude * np.sin(frequency * t)
        return None


class GridSpec(_Spec):
    """Analysis grid: log-spaced plus the harmonic points."""

    start: float = Field(1e-2, gt=0, description="Lowest frequency in rad/s")
    stop: Optional[float] = Field(None, gt=0, description="Highest frequency; defaults to pi/T")
    points_per_decade: int = Field(400, ge=1)
    include_harmonics: bool = True

    @model_validator(mode="after")
    def _non_empty(self) -> "GridSpec":
        if self.stop is not None and self.stop <= self.start:
            raise ValueError(f"empty grid: stop {self.stop} <= start {self.start}")
        return self


class LogGridSpec(_Spec):
    """``omega_i = 10 ** (start_exp + step * i)``."""

    start_exp: float = 0.0
    step: float = Field(0.025, gt=0)
    count: int = Field(81, ge=1)


class SweepSpec(_Spec):
    """Sine-sweep frequencies and timing."""

    omegas: Optional[List[float]] = Field(None, min_length=1, description="Explicit frequencies")
    log_grid: Optional[LogGridSpec] = None
    amplitude: float = Field(0.3, description="Injection amplitude")
    duration: float = Field(40.0, gt=0, description="Simulated time per frequency")
    transient_cut: float = Field(20.0, ge=0, description="Discarded leading time")

    @model_validator(mode="after")
    def _check(self) -> "SweepSpec":
        if self.omegas is None and self.log_grid is None:
            raise ValueError("sweep needs 'omegas' or 'log_grid'")
        if self.omegas is not None and any(w <= 0 for w in self.omegas):
            raise ValueError("sweep frequencies must be positive")
        if self.amplitude == 0:
            raise ValueError("injection amplitude must be nonzero")
        if self.transient_cut >= self.duration:
            raise ValueError("transient_cut must be shorter than duration")
        return self

    def frequencies(self) -> np.ndarray:
        if self.omegas is not None:
            return np.unique(np.asarray(self.omegas, dtype=float))
        grid = self.log_grid
        return log_sweep_grid(grid.start_exp, grid.step, grid.count)


class AnalysisSpec(_Spec):
    """Grid, sweep and simulation settings."""

    grid: GridSpec = Field(default_factory=GridSpec)
    sweep: SweepSpec = Field(default_factory=lambda: SweepSpec(log_grid=LogGridSpec()))
    duration: float = Field(40.0, gt=0, description="Simulated time for 'simulate'")
    settle_cycles: float = Field(4.0, ge=0, description="Cycles excluded as settling")
    robust_uncertainty: float = Field(0.5, gt=0, description="Constant worst-case |Delta|")
    harmonics: List[int] = Field(
        default_factory=list, description="Harmonic orders for summaries and lint"
    )


class OutputSpec(_Spec):
    directory: str = Field("out", description="Artifact directory")


class ExperimentConfig(_Spec):
    """Complete description of one experiment."""

    name: str = "experiment"
    seed: int = Field(0, ge=0)
    controller: ControllerSpec
    plant: PlantSpec
    disturbance: DisturbanceProfile
    outer: Optional[OuterPdSpec] = None
    analysis: AnalysisSpec = Field(default_factory=AnalysisSpec)
    output: OutputSpec = Field(default_factory=OutputSpec)

    @model_validator(mode="after")
    def _consistent_sampling(self) -> "ExperimentConfig":
        qdob = self.controller.qdob
        if qdob is not None and qdob.sample_time != self.plant.sample_time:
            raise ValueError(
                f"controller.qdob.sample_time {qdob.sample_time} differs from "
                f"plant.sample_time {self.plant.sample_time}"
            )
        return self

    @property
    def period(self) -> Optional[float]:
        """Disturbance period from the profile, else from the QDOB."""
        if self.disturbance.period is not None:
            return self.disturbance.period
        return self.controller.qdob.period if self.controller.qdob else None


def _failing_keys(error: ValidationError) -> List[str]:
    keys = []
    for item in error.errors():
        key = ".".join(str(part) for part in item["loc"]) or "<root>"
        if key not in keys:
            keys.append(key)
    return keys


def parse_experiment_config(data: Any) -> ExperimentConfig:
    """
    Validate a parsed YAML document.

    Raises:
        ConfigValidationError: Listing every failing dotted key
    """
    if not isinstance(data, dict):
        raise ConfigValidationError(
            "experiment config must be a mapping", failing_keys=["<root>"]
        )
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        keys = _failing_keys(e)
        lines = [
            f"{'.'.join(str(p) for p in item['loc']) or '<root>'}: {item['msg']}"
            for item in e.errors()
        ]
        raise ConfigValidationError(
            "invalid experiment config:\n  " + "\n  ".join(lines),
            failing_keys=keys,
            details={"errors": lines},
        ) from e


def load_experiment_config(path: Union[str, Path]) -> ExperimentConfig:
    """
    Read and validate an experiment YAML file.

    Raises:
        ArtifactIOError: File cannot be read
        ConfigValidationError: YAML syntax or schema errors
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ArtifactIOError(f"cannot read {path}: {e}", path=str(path)) from e

    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        where = f" at line {mark.line + 1}, column {mark.column + 1}" if mark else ""
        raise ConfigValidationError(
            f"{path}: YAML syntax error{where}", failing_keys=["<root>"]
        ) from e
    return parse_experiment_config(data)


def dump_experiment_config(cfg: ExperimentConfig) -> str:
    """YAML text that parses back to an equal config."""
    return yaml.safe_dump(cfg.model_dump(mode="json"), sort_keys=False, default_flow_style=False)


def save_experiment_config(cfg: ExperimentConfig, path: Union[str, Path]) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(dump_experiment_config(cfg), encoding="utf-8")
    except OSError as e:
        raise ArtifactIOError(f"cannot write {path}: {e}", path=str(path)) from e
    return path


def starter_config() -> Dict[str, Any]:
    """Desk-scale compensation experiment used by ``qdob init``."""
    return {
        "name": "quasiperiodic-desk",
        "seed": 0,
        "controller": {
            "kind": "qdob",
            "qdob": {
                "mu": 1,
                "stages": 3,
                "order_max": 256,
                "omega_a": 50.0,
                "omega_b": 100.0,
                "rho": 2.0,
                "period": 1.2566370614359172,
                "mass": 0.005613,
                "sample_time": 0.001,
            },
        },
        "plant": {"mass": 0.005613, "sample_time": 0.001},
        "disturbance": {
            "kind": "quasiperiodic_drift",
            "period": 1.2566370614359172,
            "a": [0.0, 0.0, 0.0, 0.4],
            "b": [0.0, 0.0, 0.0, 0.0, 0.3, 0.0, 0.2],
            "drift_depth": 0.2,
            "drift_bandwidth": 1.0,
        },
        "outer": {"kp": 0.02245, "kd": 0.02245, "mass_ff": 0.005613, "cutoff": 200.0},
        "analysis": {
            "duration": 40.0,
            "settle_cycles": 4.0,
            "harmonics": [3, 5, 7],
            "sweep": {"omegas": [5.0, 10.0, 25.0, 50.0], "duration": 60.0, "transient_cut": 30.0},
        },
        "output": {"directory": "out"},
    }
