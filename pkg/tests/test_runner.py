"""
Tests for the experiment runner commands.
"""

import json

import numpy as np
import pytest

from qdob.core.baselines import FirstOrderDob, FourthOrderDob
from qdob.core.observer import QdobController
from qdob.experiments.runner import (
    BODE_RESPONSES,
    analytic_sensitivity,
    build_model,
    build_observer,
    build_outer,
    cmd_bode,
    cmd_init,
    cmd_simulate,
    cmd_stability,
    cmd_sweep,
    cmd_tune_check,
    plant_response,
)
from qdob.experiments.schema import load_experiment_config, parse_experiment_config
from qdob.utils.errors import ConfigValidationError


@pytest.fixture
def dob4_cfg(small_experiment):
    small_experiment["controller"] = {"kind": "dob4", "dob_cutoff": 50.0}
    small_experiment["plant"]["mass"] = 56.13e-4
    small_experiment["analysis"]["sweep"] = {
        "omegas": [5.0, 25.0, 50.0],
        "duration": 60.0,
        "transient_cut": 30.0,
    }
    return parse_experiment_config(small_experiment)


class TestBuilders:
    """Test component construction from a config."""

    @pytest.mark.unit
    def test_observer_kinds(self, small_experiment, small_cfg):
        """Test observer construction for each kind."""
        assert isinstance(build_observer(small_cfg), QdobController)
        for kind, cls in (("dob1", FirstOrderDob), ("dob4", FourthOrderDob)):
            small_experiment["controller"] = {"kind": kind}
            assert isinstance(build_observer(parse_experiment_config(small_experiment)), cls)
        small_experiment["controller"] = {"kind": "none"}
        assert build_observer(parse_experiment_config(small_experiment)) is None

    @pytest.mark.unit
    def test_outer(self, small_cfg):
        outer = build_outer(small_cfg)
        assert outer.kp == 4.0
        assert outer.sample_time == small_cfg.plant.sample_time

    @pytest.mark.unit
    def test_model_requires_qdob(self, dob4_cfg):
        """Test that analysis needs a qdob section."""
        with pytest.raises(ConfigValidationError) as exc_info:
            build_model(dob4_cfg)
        assert exc_info.value.failing_keys == ["controller.qdob"]

    @pytest.mark.unit
    def test_plant_response(self):
        np.testing.assert_allclose(plant_response(2.0, np.array([1.0, 10.0])), [-0.5, -0.005])

    @pytest.mark.unit
    def test_analytic_sensitivity_for_baseline(self, dob4_cfg):
        """Test baseline sensitivity comes from the DOB itself."""
        w = np.array([1.0, 50.0])
        np.testing.assert_allclose(
            analytic_sensitivity(dob4_cfg, w), build_observer(dob4_cfg).sensitivity(w)
        )


class TestCommands:
    """Test the experiment commands end to end."""

    @pytest.mark.integration
    def test_bode(self, small_cfg, tmp_path):
        """Test bode artifacts and summary."""
        files = cmd_bode(small_cfg, tmp_path)
        names = {p.name for p in files}
        for name in BODE_RESPONSES:
            assert f"{name}.csv" in names
        assert {"phi_stage_1.csv", "phi_stage_2.csv", "t_tilde.csv", "bode.json"} <= names
        summary = json.loads((tmp_path / "bode.json").read_text())
        assert summary["loop_gain"] == pytest.approx(2.0)
        assert summary["plan"]["stage_steps"] == [1, 8]

    @pytest.mark.integration
    def test_bode_rerun_is_byte_identical(self, small_cfg, tmp_path):
        """Test that rerunning bode writes identical bytes."""
        first = cmd_bode(small_cfg, tmp_path / "a")
        second = cmd_bode(small_cfg, tmp_path / "b")
        assert [p.name for p in first] == [p.name for p in second]
        for a, b in zip(first, second):
            assert a.read_bytes() == b.read_bytes(), a.name

    @pytest.mark.integration
    def test_bode_grid_override(self, small_cfg, tmp_path):
        cmd_bode(small_cfg, tmp_path, grid_points=5)
        coarse = json.loads((tmp_path / "bode.json").read_text())["grid_points"]
        cmd_bode(small_cfg, tmp_path, grid_points=50)
        fine = json.loads((tmp_path / "bode.json").read_text())["grid_points"]
        assert coarse < fine

    @pytest.mark.integration
    def test_stability(self, small_cfg, tmp_path):
        reports = cmd_stability(small_cfg, tmp_path)
        assert reports["nominal"].passed
        assert reports["robust"].passed
        data = json.loads((tmp_path / "stability.json").read_text())
        assert set(data) == {"nominal", "robust"}

    @pytest.mark.integration
    def test_stability_uses_modeling_error(self, small_experiment, tmp_path):
        """Test that a configured modeling error replaces the constant bound."""
        small_experiment["plant"]["mass_ratio"] = 0.25
        reports = cmd_stability(parse_experiment_config(small_experiment), tmp_path)
        assert reports["robust"].margin == pytest.approx(3.0, rel=1e-6)
        assert not reports["robust"].passed

    @pytest.mark.unit
    def test_tune_check_clean(self, small_cfg, tmp_path):
        assert cmd_tune_check(small_cfg, tmp_path) == []
        data = json.loads((tmp_path / "tune_check.json").read_text())
        assert data == {"errors": 0, "warnings": 0, "findings": []}

    @pytest.mark.unit
    def test_tune_check_flags_high_harmonic(self, small_experiment, tmp_path):
        """Test the lint warning for a harmonic above omega_a."""
        small_experiment["analysis"]["harmonics"] = [1, 4]
        findings = cmd_tune_check(parse_experiment_config(small_experiment), tmp_path)
        assert [f["invariant"] for f in findings] == ["harmonics_below_omega_a"]

    @pytest.mark.unit
    def test_tune_check_requires_qdob(self, dob4_cfg, tmp_path):
        with pytest.raises(ConfigValidationError):
            cmd_tune_check(dob4_cfg, tmp_path)

    @pytest.mark.integration
    def test_simulate(self, small_cfg, tmp_path):
        """Test simulate artifacts and settled metrics."""
        files = cmd_simulate(small_cfg, tmp_path)
        assert [p.name for p in files] == ["trace.csv", "simulate.json"]
        summary = json.loads((tmp_path / "simulate.json").read_text())
        assert summary["samples"] == 6001
        assert summary["rms_error_settled"] < summary["rms_error_settling"]
        assert summary["harmonics"]["1"]["attenuation_db"] < -20.0
        assert summary["lifted_disturbance"]["energy_above_rho"] < 1e-6

    @pytest.mark.integration
    def test_sweep_matches_analysis(self, small_cfg, tmp_path):
        """Test the QDOB sweep against P_n S."""
        cmd_sweep(small_cfg, tmp_path)
        data = json.loads((tmp_path / "sweep.json").read_text())
        assert data["points"] == 2
        assert data["max_abs_deviation_db"] < 1.0

    @pytest.mark.slow
    @pytest.mark.integration
    @pytest.mark.parametrize("kind", ["dob4", "dob1"])
    def test_sweep_baseline_matches_analysis(self, dob4_cfg, kind, tmp_path):
        """The simulated baseline stays within 1 dB of |P_n (1 - Q)| at 5, 25 and 50 rad/s."""
        cfg = dob4_cfg.model_copy(
            update={"controller": dob4_cfg.controller.model_copy(update={"kind": kind})}
        )
        cmd_sweep(cfg, tmp_path)
        data = json.loads((tmp_path / "sweep.json").read_text())
        assert data["controller"] == kind
        assert data["points"] == 3
        assert data["max_abs_deviation_db"] < 1.0

    @pytest.mark.unit
    def test_init_writes_loadable_config(self, tmp_path):
        path = cmd_init(tmp_path / "exp.yaml")
        assert load_experiment_config(path).name == "quasiperiodic-desk"
