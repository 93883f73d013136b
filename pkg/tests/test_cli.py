"""
Tests for the qdob command-line interface.
"""

import json
from unittest.mock import patch

import pytest
from click.testing import CliRunner

from qdob.cli import EXIT_IO, EXIT_NUMERIC, EXIT_OK, EXIT_VALIDATION, cli, exit_code_for
from qdob.experiments.schema import load_experiment_config, parse_experiment_config, save_experiment_config
from qdob.utils.errors import (
    AliasingConfigError,
    ArtifactIOError,
    ConfigValidationError,
    InsufficientDataError,
    NumericFaultError,
    PlanInfeasibleError,
)


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def small_yaml(small_experiment, tmp_path):
    return save_experiment_config(parse_experiment_config(small_experiment), tmp_path / "small.yaml")


class TestExitCodes:
    """Test the error to exit-code mapping."""

    @pytest.mark.unit
    @pytest.mark.parametrize(
        "error, code",
        [
            (ConfigValidationError("bad", failing_keys=["x"]), EXIT_VALIDATION),
            (AliasingConfigError("alias"), EXIT_VALIDATION),
            (PlanInfeasibleError("short"), EXIT_VALIDATION),
            (NumericFaultError("nan", stage="inverse_plant"), EXIT_NUMERIC),
            (InsufficientDataError("few"), EXIT_NUMERIC),
            (ArtifactIOError("io"), EXIT_IO),
            (RuntimeError("boom"), EXIT_VALIDATION),
        ],
    )
    def test_mapping(self, error, code):
        """Test exit codes for each error family."""
        assert exit_code_for(error) == code


class TestCommands:
    """Test the subcommands through click's runner."""

    @pytest.mark.unit
    def test_init(self, runner, tmp_path):
        """Test that init writes a starter config."""
        path = tmp_path / "exp.yaml"
        result = runner.invoke(cli, ["init", "--output", str(path)])
        assert result.exit_code == EXIT_OK
        assert "Experiment configuration created" in result.output
        assert load_experiment_config(path).controller.kind == "qdob"

    @pytest.mark.unit
    def test_tune_check_starter_only_warns(self, runner, tmp_path):
        """Test that warnings alone keep exit code 0."""
        path = tmp_path / "exp.yaml"
        runner.invoke(cli, ["init", "-o", str(path)])
        result = runner.invoke(cli, ["tune-check", "-c", str(path), "-o", str(tmp_path / "out")])
        assert result.exit_code == EXIT_OK
        assert "omega_a_much_less_than_omega_b" in result.output
        data = json.loads((tmp_path / "out" / "tune_check.json").read_text())
        assert data["errors"] == 0
        assert data["warnings"] == 1

    @pytest.mark.unit
    def test_tune_check_error_exits_nonzero(self, runner, small_experiment, tmp_path):
        """Test exit code 1 on a lint error."""
        small_experiment["controller"]["qdob"]["rho"] = 10.0
        path = save_experiment_config(parse_experiment_config(small_experiment), tmp_path / "x.yaml")
        result = runner.invoke(cli, ["tune-check", "-c", str(path), "-o", str(tmp_path)])
        assert result.exit_code == EXIT_VALIDATION
        assert "rho_below_pi_over_L" in result.output

    @pytest.mark.integration
    def test_bode_writes_artifacts(self, runner, small_yaml, tmp_path):
        """Test bode artifacts in the output directory."""
        out = tmp_path / "bode"
        result = runner.invoke(cli, ["bode", "-c", str(small_yaml), "-o", str(out), "--grid-points", "10"])
        assert result.exit_code == EXIT_OK, result.output
        assert (out / "s.csv").exists()
        assert (out / "bode.json").exists()

    @pytest.mark.integration
    def test_stability_passes(self, runner, small_yaml, tmp_path):
        result = runner.invoke(cli, ["stability", "-c", str(small_yaml), "-o", str(tmp_path)])
        assert result.exit_code == EXIT_OK, result.output
        assert "STABILITY SUMMARY" in result.output

    @pytest.mark.integration
    def test_stability_failure_exits_validation(self, runner, small_experiment, tmp_path):
        """Test exit code 1 when the robust check fails."""
        small_experiment["plant"]["mass_ratio"] = 0.25
        path = save_experiment_config(parse_experiment_config(small_experiment), tmp_path / "x.yaml")
        result = runner.invoke(cli, ["stability", "-c", str(path), "-o", str(tmp_path), "-q"])
        assert result.exit_code == EXIT_VALIDATION
        assert not json.loads((tmp_path / "stability.json").read_text())["robust"]["passed"]

    @pytest.mark.unit
    def test_missing_config_is_io_error(self, runner, tmp_path):
        """Test exit code 3 for a missing config file."""
        result = runner.invoke(cli, ["bode", "-c", str(tmp_path / "missing.yaml")])
        assert result.exit_code == EXIT_IO
        assert "Error" in result.output

    @pytest.mark.unit
    def test_invalid_config_is_validation_error(self, runner, tmp_path):
        """Test exit code 1 for an invalid config."""
        path = tmp_path / "bad.yaml"
        path.write_text("name: bad\nplant: {mass: -1.0, sample_time: 0.001}\n", encoding="utf-8")
        result = runner.invoke(cli, ["simulate", "-c", str(path)])
        assert result.exit_code == EXIT_VALIDATION

    @pytest.mark.unit
    def test_quiet_suppresses_summary(self, runner, small_yaml, tmp_path):
        """Test that --quiet hides the summary."""
        result = runner.invoke(cli, ["tune-check", "-c", str(small_yaml), "-o", str(tmp_path), "-q"])
        assert result.exit_code == EXIT_OK
        assert "No tuning findings" not in result.output

    @pytest.mark.unit
    def test_numeric_fault_exit_code(self, runner, small_yaml, tmp_path):
        """Test exit code 2 on a numeric fault."""
        fault = NumericFaultError("non-finite estimate", stage="multistage_filter", step_index=7)
        with patch("qdob.cli.cmd_simulate", side_effect=fault):
            result = runner.invoke(cli, ["simulate", "-c", str(small_yaml), "-o", str(tmp_path)])
        assert result.exit_code == EXIT_NUMERIC
        assert "non-finite estimate" in result.output
