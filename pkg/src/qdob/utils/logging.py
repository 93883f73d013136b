"""
QDOB Logging Configuration

Structured logging setup for filter planning, simulations and sweeps.
"""

import json
import logging
import sys
from datetime import datetime, timezone
from typing import Any, Dict, Optional


class StructuredFormatter(logging.Formatter):
    """Structured log formatter emitting one JSON object per record."""

    def format(self, record: logging.LogRecord) -> str:
        """Format log record with structured data."""
        record.timestamp = datetime.now(timezone.utc).isoformat()

        structured = getattr(record, "structured_data", {})

        log_entry: Dict[str, Any] = {
            "timestamp": record.timestamp,
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "module": record.module,
            "function": record.funcName,
            "line": record.lineno,
        }

        if structured:
            log_entry["data"] = structured

        if record.exc_info:
            log_entry["exception"] = self.formatException(record.exc_info)

        return json.dumps(log_entry, default=str)


def setup_logging(
    level: str = "INFO", enable_structured: bool = True, log_file: Optional[str] = None
) -> logging.Logger:
    """
    Setup qdob logging configuration.

    Args:
        level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        enable_structured: Enable structured logging format
        log_file: Optional log file path

    Returns:
        Configured logger instance
    """
    logger = logging.getLogger("qdob")
    logger.setLevel(getattr(logging, level.upper()))

    logger.handlers.clear()

    if enable_structured:
        formatter: logging.Formatter = StructuredFormatter()
    else:
        formatter = logging.Formatter(
            "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
        )

    # stderr keeps stdout free for command summaries
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    if log_file:
        file_handler = logging.FileHandler(log_file)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    return logger


def get_logger(name: str = "qdob") -> logging.Logger:
    """Get a logger instance for the specified name."""
    return logging.getLogger(name)


def log_plan_built(
    logger: logging.Logger,
    stages: int,
    order: int,
    residual_delay: int,
    period_samples: int,
    additional_data: Optional[Dict[str, Any]] = None,
) -> None:
    """
    Log construction of a multistage filter plan.

    Args:
        logger: Logger instance
        stages: Number of FIR stages
        order: Common stage order N
        residual_delay: Residual delay eta in samples
        period_samples: Total delay in samples
        additional_data: Additional structured data
    """
    structured_data = {
        "operation": "plan_multistage",
        "stages": stages,
        "order": order,
        "residual_delay": residual_delay,
        "period_samples": period_samples,
    }

    if additional_data:
        structured_data.update(additional_data)

    logger.debug(
        f"Multistage plan built: l={stages}, N={order}, eta={residual_delay}",
        extra={"structured_data": structured_data},
    )


def log_sweep_point(
    logger: logging.Logger,
    omega: float,
    gain_db: float,
    periods_used: int,
    additional_data: Optional[Dict[str, Any]] = None,
) -> None:
    """
    Log one measured point of a sine sweep.

    Args:
        logger: Logger instance
        omega: Injection frequency in rad/s
        gain_db: Measured gain in dB
        periods_used: Integer number of periods in the DFT window
        additional_data: Additional structured data
    """
    structured_data = {
        "operation": "sweep_point",
        "omega": omega,
        "gain_db": gain_db,
        "periods_used": periods_used,
    }

    if additional_data:
        structured_data.update(additional_data)

    logger.debug(
        f"Sweep point: {omega:.4g} rad/s -> {gain_db:.2f} dB",
        extra={"structured_data": structured_data},
    )


def log_simulation_run(
    logger: logging.Logger,
    controller: str,
    steps: int,
    duration: float,
    rms_output: float,
    additional_data: Optional[Dict[str, Any]] = None,
) -> None:
    """
    Log completion of a closed-loop simulation run.

    Args:
        logger: Logger instance
        controller: Controller stack label
        steps: Number of recorded samples
        duration: Simulated time in seconds
        rms_output: RMS of the plant output over the whole run
        additional_data: Additional structured data
    """
    structured_data = {
        "operation": "run_closed_loop",
        "controller": controller,
        "steps": steps,
        "duration": duration,
        "rms_output": rms_output,
    }

    if additional_data:
        structured_data.update(additional_data)

    logger.info(
        f"Simulation finished: {controller}, {steps} samples",
        extra={"structured_data": structured_data},
    )


def log_lint_finding(
    logger: logging.Logger,
    invariant: str,
    severity: str,
    message: str,
    additional_data: Optional[Dict[str, Any]] = None,
) -> None:
    """
    Log a hyperparameter lint finding.

    Args:
        logger: Logger instance
        invariant: Name of the checked invariant
        severity: "error" or "warning"
        message: Human-readable explanation
        additional_data: Additional structured data
    """
    structured_data = {
        "operation": "lint_config",
        "invariant": invariant,
        "severity": severity,
    }

    if additional_data:
        structured_data.update(additional_data)

    level = logging.ERROR if severity == "error" else logging.WARNING
    logger.log(level, message, extra={"structured_data": structured_data})
