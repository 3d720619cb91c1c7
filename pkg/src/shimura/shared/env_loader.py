"""
Environment loader - reads .env files and system environment variables
"""

import os
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

PROJECT_ROOT = Path(__file__).resolve().parents[3]


def load_env_file(env_file_path: Optional[str] = None) -> bool:
    """
    Load variables from an environment-specific .env file.

    Args:
        env_file_path: path relative to the project root (default: .env.<SHIMURA_ENV>,
            falling back to .env)

    Returns:
        True if a file was found and loaded
    """
    if env_file_path is None:
        environment = os.getenv("SHIMURA_ENV", "local")
        env_file_path = f".env.{environment}"
        if not (PROJECT_ROOT / env_file_path).exists():
            env_file_path = ".env"

    env_path = PROJECT_ROOT / env_file_path
    if not env_path.exists():
        return False

    # variables already present in the process environment win
    return load_dotenv(env_path, override=False)


def get_env_var(key: str, default: Optional[str] = None, required: bool = False) -> Optional[str]:
    """
    Read an environment variable.

    Raises:
        ValueError: if required and the variable is unset or empty
    """
    value = os.getenv(key, default)

    if required and not value:
        raise ValueError(f"Required environment variable '{key}' is not set")

    return value


def get_env_bool(key: str, default: bool) -> bool:
    """Read a boolean flag ('true'/'false', '1'/'0')"""
    raw = get_env_var(key)
    if raw is None:
        return default
    return raw.strip().lower() in ("1", "true", "yes", "on")


def get_env_int(key: str, default: int) -> int:
    """Read an integer, accepting forms such as 10**6 written as 1000000 or 1e6"""
    raw = get_env_var(key)
    if raw is None or not raw.strip():
        return default
    raw = raw.strip()
    try:
        return int(raw)
    except ValueError:
        value = float(raw)
        if not value.is_integer():
            raise ValueError(f"Environment variable '{key}' must be an integer, got {raw!r}")
        return int(value)
