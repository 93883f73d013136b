"""Experiment configuration schema and the command runners behind the CLI."""

from .runner import (
    build_disturbance,
    build_model,
    build_observer,
    build_outer,
    build_plant,
    cmd_bode,
    cmd_init,
    cmd_simulate,
    cmd_stability,
    cmd_sweep,
    cmd_tune_check,
    summarize_trace,
)
from .schema import (
    ControllerSpec,
    ExperimentConfig,
    OuterPdSpec,
    PlantSpec,
    dump_experiment_config,
    load_experiment_config,
    parse_experiment_config,
    save_experiment_config,
    starter_config,
)

__all__ = [
    "ControllerSpec",
    "ExperimentConfig",
    "OuterPdSpec",
    "PlantSpec",
    "build_disturbance",
    "build_model",
    "build_observer",
    "build_outer",
    "build_plant",
    "cmd_bode",
    "cmd_init",
    "cmd_simulate",
    "cmd_stability",
    "cmd_sweep",
    "cmd_tune_check",
    "dump_experiment_config",
    "load_experiment_config",
    "parse_experiment_config",
    "save_experiment_config",
    "starter_config",
    "summarize_trace",
]
