"""
Tests for logging, runtime settings and error types.
"""

import json
import logging

import pytest

from qdob.utils.config import RuntimeSettings
from qdob.utils.errors import ConfigValidationError, NumericFaultError, QdobError
from qdob.utils.logging import StructuredFormatter, log_lint_finding, setup_logging


class TestStructuredFormatter:
    """Test the JSON log line format."""

    @pytest.mark.unit
    def test_includes_structured_data(self):
        """Test structured data in the JSON line."""
        record = logging.LogRecord("qdob.core", logging.WARNING, __file__, 10, "ripple", None, None)
        record.structured_data = {"operation": "plan_multistage", "peak": 1.002}
        entry = json.loads(StructuredFormatter().format(record))
        assert entry["level"] == "WARNING"
        assert entry["message"] == "ripple"
        assert entry["data"] == {"operation": "plan_multistage", "peak": 1.002}

    @pytest.mark.unit
    def test_lint_finding_levels(self, caplog):
        """Test lint findings map to log levels."""
        logger = logging.getLogger("qdob.test")
        with caplog.at_level(logging.WARNING, logger="qdob"):
            log_lint_finding(logger, "plan_feasible", "error", "too short")
            log_lint_finding(logger, "harmonics_below_omega_a", "warning", "high")
        assert [r.levelno for r in caplog.records] == [logging.ERROR, logging.WARNING]
        assert caplog.records[0].structured_data["invariant"] == "plan_feasible"

    @pytest.mark.unit
    def test_setup_logging_writes_file(self, tmp_path):
        """Test the optional log file handler."""
        path = tmp_path / "qdob.log"
        logger = setup_logging("DEBUG", enable_structured=True, log_file=str(path))
        logger.info("hello", extra={"structured_data": {"k": 1}})
        for handler in logger.handlers:
            handler.flush()
        assert json.loads(path.read_text().splitlines()[-1])["data"] == {"k": 1}


class TestRuntimeSettings:
    """Test environment-driven settings."""

    @pytest.mark.unit
    def test_defaults(self, monkeypatch):
        for name in ("QDOB_LOG_LEVEL", "QDOB_STRUCTURED_LOGGING", "QDOB_LOG_FILE", "QDOB_TRACE_CONSOLE"):
            monkeypatch.delenv(name, raising=False)
        assert RuntimeSettings.from_env() == RuntimeSettings()

    @pytest.mark.unit
    def test_from_env(self, monkeypatch):
        """Test settings read from the environment."""
        monkeypatch.setenv("QDOB_LOG_LEVEL", "DEBUG")
        monkeypatch.setenv("QDOB_STRUCTURED_LOGGING", "False")
        monkeypatch.setenv("QDOB_TRACE_CONSOLE", "true")
        settings = RuntimeSettings.from_env()
        assert settings.log_level == "DEBUG"
        assert settings.enable_structured_logging is False
        assert settings.to_dict()["trace_console"] is True


class TestErrors:
    """Test error rendering and payloads."""

    @pytest.mark.unit
    def test_code_prefix(self):
        assert str(QdobError("plain")) == "plain"
        error = ConfigValidationError("bad keys", failing_keys=["plant.mass"])
        assert str(error).startswith("[CONFIG_VALIDATION]")
        assert error.failing_keys == ["plant.mass"]

    @pytest.mark.unit
    def test_numeric_fault_payload(self):
        """Test NumericFaultError fields."""
        error = NumericFaultError("nan", stage="periodic_pass", step_index=12)
        assert error.error_code == "NUMERIC_FAULT"
        assert (error.stage, error.step_index) == ("periodic_pass", 12)
        assert not isinstance(error, ValueError)
