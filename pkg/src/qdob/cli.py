"""
qdob CLI: run filter-design, simulation and verification experiments.
"""

import functools
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import click

from .experiments.runner import (
    cmd_bode,
    cmd_init,
    cmd_simulate,
    cmd_stability,
    cmd_sweep,
    cmd_tune_check,
)
from .experiments.schema import ExperimentConfig, load_experiment_config
from .utils.config import RuntimeSettings
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
from .utils.logging import get_logger, setup_logging
from .utils.telemetry import setup_tracing

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERIC = 2
EXIT_IO = 3

_EXIT_CODES = (
    ((ConfigValidationError, InvalidArgumentError, AliasingConfigError), EXIT_VALIDATION),
    ((PlanInfeasibleError, DomainError), EXIT_VALIDATION),
    ((NumericFaultError, InsufficientDataError), EXIT_NUMERIC),
    ((ArtifactIOError,), EXIT_IO),
)


def exit_code_for(error: BaseException) -> int:
    """Stable exit code of a failed command."""
    for types, code in _EXIT_CODES:
        if isinstance(error, types):
            return code
    return EXIT_VALIDATION


def _experiment_options(func: Callable) -> Callable:
    """Options shared by every experiment subcommand."""

    @click.option(
        "--config",
        "-c",
        "config_path",
        required=True,
        type=click.Path(dir_okay=False),
        help="Experiment YAML file",
    )
    @click.option("--out", "-o", type=click.Path(file_okay=False), help="Output directory")
    @click.option("--seed", type=click.IntRange(min=0), help="Override the config seed")
    @click.option("--quiet", "-q", is_flag=True, help="Only log warnings and errors")
    @click.option("--trace", is_flag=True, help="Print OpenTelemetry spans to stderr")
    @functools.wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        return func(*args, **kwargs)

    return wrapper


def _grid_points_option(func: Callable) -> Callable:
    return click.option(
        "--grid-points",
        type=click.IntRange(min=1),
        help="Log-grid points per decade (overrides analysis.grid)",
    )(func)


def _configure_runtime(quiet: bool, trace: bool) -> None:
    settings = RuntimeSettings.from_env()
    level = "WARNING" if quiet else settings.log_level
    setup_logging(level, settings.enable_structured_logging, settings.log_file)
    setup_tracing(console=trace or settings.trace_console)


def _load(config_path: str, seed: Optional[int]) -> ExperimentConfig:
    cfg = load_experiment_config(config_path)
    if seed is not None:
        cfg = cfg.model_copy(update={"seed": seed})
    return cfg


def _output_dir(cfg: ExperimentConfig, out: Optional[str]) -> Path:
    return Path(out) if out else Path(cfg.output.directory)


def _fail(error: BaseException) -> None:
    if not isinstance(error, QdobError):
        logger.exception("unexpected failure")
    click.echo(f"❌ Error: {error}", err=True)
    sys.exit(exit_code_for(error))


def _echo_files(files: List[Path], quiet: bool) -> None:
    if quiet:
        return
    for path in files:
        click.echo(f"📄 {path}")


@click.group()
@click.version_option(package_name="qdob-lab")
def cli():
    """qdob: quasiperiodic disturbance observer design and verification."""
    pass


@cli.command()
@_experiment_options
@_grid_points_option
def bode(
    config_path: str,
    out: Optional[str],
    seed: Optional[int],
    quiet: bool,
    trace: bool,
    grid_points: Optional[int],
):
    """Write frequency responses of Phi, Q, B, Gamma, S, T and |T~|."""
    try:
        _configure_runtime(quiet, trace)
        cfg = _load(config_path, seed)
        out_dir = _output_dir(cfg, out)
        if not quiet:
            click.echo(f"📈 Evaluating frequency responses for '{cfg.name}'...")
        files = cmd_bode(cfg, out_dir, grid_points)
        _echo_files(files, quiet)
        if not quiet:
            click.echo(f"✅ Wrote {len(files)} files to {out_dir}")
    except Exception as e:
        _fail(e)


@cli.command()
@_experiment_options
def sweep(
    config_path: str,
    out: Optional[str],
    seed: Optional[int],
    quiet: bool,
    trace: bool,
):
    """Measure the simulated disturbance-to-output gain by sine injection."""
    try:
        _configure_runtime(quiet, trace)
        cfg = _load(config_path, seed)
        out_dir = _output_dir(cfg, out)
        if not quiet:
            count = cfg.analysis.sweep.frequencies().size
            click.echo(f"🔊 Sweeping {count} frequencies with '{cfg.controller.kind}'...")
        files = cmd_sweep(cfg, out_dir)
        _echo_files(files, quiet)
        if not quiet:
            click.echo("✅ Sweep completed")
    except Exception as e:
        _fail(e)


@cli.command()
@_experiment_options
def simulate(
    config_path: str,
    out: Optional[str],
    seed: Optional[int],
    quiet: bool,
    trace: bool,
):
    """Run the closed loop and summarize the settled error."""
    try:
        _configure_runtime(quiet, trace)
        cfg = _load(config_path, seed)
        out_dir = _output_dir(cfg, out)
        if not quiet:
            click.echo(
                f"🧪 Simulating {cfg.analysis.duration:g} s with '{cfg.controller.kind}'..."
            )
        files = cmd_simulate(cfg, out_dir)
        _echo_files(files, quiet)
        if not quiet:
            click.echo("✅ Simulation completed")
    except Exception as e:
        _fail(e)


@cli.command()
@_experiment_options
@_grid_points_option
def stability(
    config_path: str,
    out: Optional[str],
    seed: Optional[int],
    quiet: bool,
    trace: bool,
    grid_points: Optional[int],
):
    """Check the nominal phase corridor and the small-gain condition."""
    try:
        _configure_runtime(quiet, trace)
        cfg = _load(config_path, seed)
        reports = cmd_stability(cfg, _output_dir(cfg, out), grid_points)
        if not quiet:
            _display_stability(reports)
        if not all(report.passed for report in reports.values()):
            sys.exit(EXIT_VALIDATION)
    except Exception as e:
        _fail(e)


@cli.command("tune-check")
@_experiment_options
def tune_check(
    config_path: str,
    out: Optional[str],
    seed: Optional[int],
    quiet: bool,
    trace: bool,
):
    """Lint the QDOB hyperparameters against the tuning guide."""
    try:
        _configure_runtime(quiet, trace)
        cfg = _load(config_path, seed)
        findings = cmd_tune_check(cfg, _output_dir(cfg, out))
        if not quiet:
            _display_findings(findings)
        if any(f["severity"] == "error" for f in findings):
            sys.exit(EXIT_VALIDATION)
    except Exception as e:
        _fail(e)


@cli.command()
@click.option("--output", "-o", type=click.Path(dir_okay=False), help="Output file path")
def init(output: Optional[str]):
    """Initialize a starter experiment configuration file."""
    try:
        config_path = cmd_init(Path(output) if output else Path("qdob-experiment.yaml"))
    except Exception as e:
        _fail(e)
        return

    click.echo(f"📄 Experiment configuration created: {config_path}")
    click.echo("Edit the file to customize the controller, plant and disturbance.")


def _display_stability(reports: Dict[str, Any]) -> None:
    click.echo("\n" + "=" * 60)
    click.echo("🛡️  STABILITY SUMMARY")
    click.echo("=" * 60)
    for report in reports.values():
        click.echo(report.get_summary())
    click.echo("=" * 60)


def _display_findings(findings: List[Dict[str, Any]]) -> None:
    if not findings:
        click.echo("✅ No tuning findings")
        return
    icons = {"error": "❌", "warning": "⚠️ "}
    for finding in findings:
        icon = icons.get(finding["severity"], "•")
        click.echo(f"{icon} {finding['invariant']}: {finding['message']}")


def main():
    """Main entry point for the CLI."""
    cli()


if __name__ == "__main__":
    main()
