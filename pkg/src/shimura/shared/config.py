# Runtime configuration read from the environment

from dataclasses import dataclass, asdict
from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict

from .env_loader import PROJECT_ROOT, get_env_bool, get_env_int, get_env_var, load_env_file


class OutputFormat(Enum):
    """CLI output format"""
    JSON = "json"
    TEXT = "text"


class LogFormat(Enum):
    """Log renderer"""
    JSON = "json"
    CONSOLE = "console"


@dataclass
class ShimuraConfig:
    """Library and CLI settings"""
    data_dir: Path
    trial_division_bound: int
    residue_limit: int
    representation_bound_factor: int
    log_level: str
    log_format: LogFormat
    output_format: OutputFormat
    verify_checksums: bool

    @classmethod
    def from_environment(cls) -> "ShimuraConfig":
        """Load settings from environment variables (and .env if present)"""
        load_env_file()

        config = cls(
            data_dir=Path(get_env_var("SHIMURA_DATA_DIR", str(PROJECT_ROOT / "data"))),
            trial_division_bound=get_env_int("SHIMURA_TRIAL_BOUND", 10**6),
            residue_limit=get_env_int("SHIMURA_RESIDUE_LIMIT", 10**12),
            representation_bound_factor=get_env_int("SHIMURA_REPRESENTATION_FACTOR", 4),
            log_level=get_env_var("SHIMURA_LOG_LEVEL", "WARNING").upper(),
            log_format=LogFormat(get_env_var("SHIMURA_LOG_FORMAT", "json").lower()),
            output_format=OutputFormat(get_env_var("SHIMURA_OUTPUT_FORMAT", "json").lower()),
            verify_checksums=get_env_bool("SHIMURA_VERIFY_CHECKSUMS", True),
        )
        config.validate()
        return config

    def validate(self) -> None:
        """Validate ranges; raise ValueError on nonsense settings"""
        if self.trial_division_bound < 2:
            raise ValueError("trial_division_bound must be at least 2")
        if self.residue_limit < self.trial_division_bound:
            raise ValueError("residue_limit must not be below trial_division_bound")
        if self.representation_bound_factor < 1:
            raise ValueError("representation_bound_factor must be positive")
        if self.log_level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"unknown log level {self.log_level!r}")

    def to_dict(self) -> Dict[str, Any]:
        """Convert to a JSON-friendly dictionary"""
        data = asdict(self)
        data["data_dir"] = str(self.data_dir)
        data["log_format"] = self.log_format.value
        data["output_format"] = self.output_format.value
        return data


@lru_cache(maxsize=1)
def get_config() -> ShimuraConfig:
    """Process-wide configuration singleton"""
    return ShimuraConfig.from_environment()
