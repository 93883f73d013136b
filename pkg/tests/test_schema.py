"""
Tests for experiment configuration loading and validation.
"""

from pathlib import Path

import numpy as np
import pytest
import yaml

from qdob.experiments.schema import (
    ExperimentConfig,
    dump_experiment_config,
    load_experiment_config,
    parse_experiment_config,
    save_experiment_config,
    starter_config,
)
from qdob.utils.errors import ArtifactIOError, ConfigValidationError

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"


class TestParseExperimentConfig:
    """Test schema validation."""

    @pytest.mark.unit
    def test_starter_config_is_valid(self, starter_dict):
        """Test that the starter config validates."""
        cfg = parse_experiment_config(starter_dict)
        assert isinstance(cfg, ExperimentConfig)
        assert cfg.controller.kind == "qdob"
        assert cfg.period == pytest.approx(2 * np.pi / 5)
        assert cfg.disturbance.harmonic_orders == [3, 5, 7]

    @pytest.mark.unit
    def test_reports_every_failing_key(self, starter_dict):
        """Test that every failing key is reported at once."""
        starter_dict["plant"]["mass"] = -1.0
        starter_dict["controller"]["qdob"]["stages"] = 0
        starter_dict["bogus"] = 1
        with pytest.raises(ConfigValidationError) as exc_info:
            parse_experiment_config(starter_dict)
        keys = exc_info.value.failing_keys
        assert "plant.mass" in keys
        assert "controller.qdob.stages" in keys
        assert "bogus" in keys

    @pytest.mark.unit
    def test_rejects_non_mapping(self):
        with pytest.raises(ConfigValidationError) as exc_info:
            parse_experiment_config([1, 2])
        assert exc_info.value.failing_keys == ["<root>"]

    @pytest.mark.unit
    def test_qdob_kind_requires_section(self, starter_dict):
        """Test that kind qdob needs a qdob section."""
        del starter_dict["controller"]["qdob"]
        with pytest.raises(ConfigValidationError):
            parse_experiment_config(starter_dict)

    @pytest.mark.unit
    def test_sample_times_must_agree(self, starter_dict):
        """Test plant and observer sample times agree."""
        starter_dict["plant"]["sample_time"] = 2e-3
        with pytest.raises(ConfigValidationError):
            parse_experiment_config(starter_dict)

    @pytest.mark.unit
    def test_sweep_needs_frequencies(self, starter_dict):
        starter_dict["analysis"]["sweep"] = {"duration": 10.0, "transient_cut": 1.0}
        with pytest.raises(ConfigValidationError):
            parse_experiment_config(starter_dict)

    @pytest.mark.unit
    def test_sweep_transient_shorter_than_duration(self, starter_dict):
        """Test the transient cut bound."""
        starter_dict["analysis"]["sweep"]["transient_cut"] = 60.0
        with pytest.raises(ConfigValidationError):
            parse_experiment_config(starter_dict)

    @pytest.mark.unit
    def test_log_grid_frequencies(self, starter_dict):
        """Test log grid expansion."""
        starter_dict["analysis"]["sweep"] = {"log_grid": {"start_exp": 0.0, "step": 0.5, "count": 3}}
        cfg = parse_experiment_config(starter_dict)
        np.testing.assert_allclose(cfg.analysis.sweep.frequencies(), [1.0, 10**0.5, 10.0])

    @pytest.mark.unit
    def test_baseline_without_qdob(self, starter_dict):
        starter_dict["controller"] = {"kind": "dob4", "dob_cutoff": 40.0}
        cfg = parse_experiment_config(starter_dict)
        assert cfg.controller.qdob is None
        assert cfg.period == pytest.approx(2 * np.pi / 5)

    @pytest.mark.unit
    def test_command_functions(self, starter_dict):
        starter_dict["outer"].update({"command": "sine", "command_amplitude": 2.0, "command_frequency": 3.0})
        cfg = parse_experiment_config(starter_dict)
        t = np.array([0.1, 0.2])
        np.testing.assert_allclose(cfg.outer.command_function()(t), 2.0 * np.sin(3.0 * t))


class TestConfigFiles:
    """Test YAML loading and saving."""

    @pytest.mark.unit
    def test_round_trip(self, starter_dict, tmp_path):
        """Test parse, dump and parse again."""
        cfg = parse_experiment_config(starter_dict)
        path = save_experiment_config(cfg, tmp_path / "nested" / "exp.yaml")
        assert load_experiment_config(path) == cfg

    @pytest.mark.unit
    def test_dump_is_plain_yaml(self, starter_dict):
        text = dump_experiment_config(parse_experiment_config(starter_dict))
        assert yaml.safe_load(text)["controller"]["kind"] == "qdob"

    @pytest.mark.unit
    def test_missing_file(self, tmp_path):
        with pytest.raises(ArtifactIOError):
            load_experiment_config(tmp_path / "missing.yaml")

    @pytest.mark.unit
    def test_yaml_syntax_error_reports_line(self, tmp_path):
        """Test that a YAML syntax error names its line."""
        path = tmp_path / "broken.yaml"
        path.write_text("name: x\ncontroller: [unclosed\n", encoding="utf-8")
        with pytest.raises(ConfigValidationError) as exc_info:
            load_experiment_config(path)
        assert "line" in str(exc_info.value)

    @pytest.mark.unit
    def test_starter_config_is_fresh_each_call(self):
        first = starter_config()
        first["name"] = "changed"
        assert starter_config()["name"] == "quasiperiodic-desk"

    @pytest.mark.unit
    @pytest.mark.parametrize("path", sorted(CONFIG_DIR.glob("*.yaml")), ids=lambda p: p.stem)
    def test_shipped_configs_are_valid(self, path):
        """Test every file in configs/ validates."""
        cfg = load_experiment_config(path)
        assert cfg.output.directory.startswith("out")
