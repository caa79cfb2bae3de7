"""Settings for DimerCode.

Defaults for every command can be overridden from a YAML file, looked up in
this order:
1. An explicit path (the ``--settings`` flag)
2. DIMERCODE_SETTINGS environment variable (path to a file)
3. dimercode.yaml in the working directory
4. Built-in defaults

Command-line flags override whatever the settings provide.
"""

import os
from pathlib import Path
from typing import Optional, Tuple

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from dimercode.errors import SettingsError
from dimercode.models.dimer import to_fraction

SETTINGS_ENV = "DIMERCODE_SETTINGS"
SETTINGS_FILENAME = "dimercode.yaml"
DEFAULT_SOURCE = "built-in defaults"


class Settings(BaseModel):
    """Tunable defaults."""

    model_config = ConfigDict(extra="forbid")

    seed: int = Field(default=0, ge=0, lt=2**64, description="Default random seed")
    threads: Optional[int] = Field(
        default=None, ge=1, description="Worker processes (None = machine parallelism)"
    )
    log_level: str = Field(default="WARNING", description="Logging level name")

    audit_n_max: int = Field(default=500, ge=1, description="Largest N of the bounds audit")
    audit_values: list[str] = Field(
        default=["1/4", "1/2", "1", "2", "4"], min_length=1, description="Per-weight audit values"
    )
    grid_size: int = Field(default=60, ge=1, description="Audit grid points sampled from the cube")
    grid_seed: int = Field(default=0, ge=0, description="Seed of the audit grid sample")

    verify_max_n: int = Field(default=12, ge=1, le=24, description="Largest N for brute force")
    identity_max_n: int = Field(default=50, ge=2)
    binomial_max_n: int = Field(default=30, ge=0)
    series_max_n: int = Field(default=64, ge=1)

    census_n: int = Field(default=10, ge=2, le=24)
    sample_n: int = Field(default=50, ge=2)
    sample_m: int = Field(default=100_000, ge=1)
    bandwidth: float = Field(default=0.1, gt=0, description="KDE standard deviation")

    def audit_fractions(self) -> list:
        """Audit values as exact fractions."""
        try:
            return [to_fraction(value) for value in self.audit_values]
        except (ValueError, ZeroDivisionError) as e:
            raise SettingsError(f"invalid audit value: {e}") from e


def load_settings_file(path: Path) -> Settings:
    """
    Read and validate a YAML settings file.

    Raises:
        SettingsError: unreadable file, malformed YAML or invalid values
    """
    try:
        with open(path, "r") as f:
            data = yaml.safe_load(f)
    except OSError as e:
        raise SettingsError(f"cannot read settings file {path}: {e}") from e
    except yaml.YAMLError as e:
        raise SettingsError(f"malformed YAML in {path}: {e}") from e

    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise SettingsError(f"settings file {path} must hold a mapping")
    try:
        return Settings(**data)
    except ValidationError as e:
        raise SettingsError(f"invalid settings in {path}:\n{e}") from e


def resolve_settings(
    explicit: Optional[Path] = None, cwd: Optional[Path] = None
) -> Tuple[Settings, str]:
    """
    Find settings with fallback logic.

    Args:
        explicit: Path given on the command line
        cwd: Directory searched for dimercode.yaml (defaults to the working directory)

    Returns:
        Tuple of (settings, source_description)
    """
    if explicit is not None:
        return load_settings_file(explicit), f"--settings ({explicit})"

    env_path = os.getenv(SETTINGS_ENV)
    if env_path:
        path = Path(env_path).expanduser()
        return load_settings_file(path), f"{SETTINGS_ENV} ({path})"

    local = (cwd or Path.cwd()) / SETTINGS_FILENAME
    if local.is_file():
        return load_settings_file(local), f"{SETTINGS_FILENAME} in working directory"

    return Settings(), DEFAULT_SOURCE
