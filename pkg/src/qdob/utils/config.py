"""
QDOB Runtime Configuration

Process-level settings for logging and tracing. Experiment parameters live in
``qdob.experiments.schema``.
"""

import os
from dataclasses import dataclass
from typing import Any, Dict, Optional


def _env_flag(name: str, default: str) -> bool:
    return os.getenv(name, default).lower() == "true"


@dataclass
class RuntimeSettings:
    """Runtime settings shared by the CLI and library entry points."""

    log_level: str = "INFO"
    enable_structured_logging: bool = True
    log_file: Optional[str] = None

    trace_console: bool = False

    @classmethod
    def from_env(cls) -> "RuntimeSettings":
        """Create settings from environment variables."""
        return cls(
            log_level=os.getenv("QDOB_LOG_LEVEL", "INFO"),
            enable_structured_logging=_env_flag("QDOB_STRUCTURED_LOGGING", "true"),
            log_file=os.getenv("QDOB_LOG_FILE"),
            trace_console=_env_flag("QDOB_TRACE_CONSOLE", "false"),
        )

    def to_dict(self) -> Dict[str, Any]:
        """Convert settings to dictionary."""
        return {
            "log_level": self.log_level,
            "enable_structured_logging": self.enable_structured_logging,
            "log_file": self.log_file,
            "trace_console": self.trace_console,
        }
