"""
Run configuration and environment settings

Values are layered: built-in defaults, then SPA_* environment variables
(a .env file is honoured), then a JSON config file, then command-line flags.
"""

import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Union

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, field_validator

from model.params import ModelParams

logger = logging.getLogger(__name__)

PARAM_KEYS = (
    "a", "b", "alpha", "beta", "d", "M", "m_dist", "n0", "steps", "seed",
    "track_k", "checkpoint_stride", "torus_delta",
)
RUN_KEYS = (
    "out", "replicas", "jobs", "k_max", "edge_log", "record_timing",
    "progress", "profile", "log_level", "input", "kind",
)
PARAM_DEFAULTS: Dict[str, Any] = {"b": 1.0, "beta": 1.0, "d": 1, "m_dist": [1.0]}


class Settings(BaseModel):
    """Environment-level defaults."""

    log_level: str = "INFO"
    jobs: int = Field(default=1, ge=1)
    torus_delta: float = Field(default=0.01, gt=0.0, le=0.5)
    output_dir: Path = Path("output")
    progress: bool = False


_settings_instance: Optional[Settings] = None


def get_settings() -> Settings:
    """
    Get or create the process-wide settings.

    Reads SPA_LOG_LEVEL, SPA_JOBS, SPA_TORUS_DELTA, SPA_OUTPUT_DIR and
    SPA_PROGRESS once, after loading a .env file if present.
    """
    global _settings_instance

    if _settings_instance is None:
        load_dotenv()
        _settings_instance = Settings(
            log_level=os.getenv("SPA_LOG_LEVEL", "INFO").upper(),
            jobs=int(os.getenv("SPA_JOBS", "1")),
            torus_delta=float(os.getenv("SPA_TORUS_DELTA", "0.01")),
            output_dir=Path(os.getenv("SPA_OUTPUT_DIR", "output")),
            progress=os.getenv("SPA_PROGRESS", "false").lower() == "true",
        )
    return _settings_instance


def reset_settings() -> None:
    """Drop the cached settings (useful for testing)."""
    global _settings_instance
    _settings_instance = None


def parse_m_dist(value: Union[str, List[float], None]) -> Optional[List[float]]:
    """'0.5,0.5' -> [0.5, 0.5]; lists pass through."""
    if value is None:
        return None
    if isinstance(value, str):
        try:
            return [float(part) for part in value.split(",") if part.strip()]
        except ValueError:
            raise ValueError(f"--m-dist expects comma-separated numbers, got {value!r}") from None
    return [float(part) for part in value]


class RunConfig(BaseModel):
    """Everything one CLI invocation needs."""

    model_config = ConfigDict(extra="forbid")

    params: Optional[ModelParams] = None
    out: Path = Path("output")
    replicas: int = Field(default=1, ge=1)
    jobs: int = Field(default=1, ge=1)
    k_max: int = Field(default=16, ge=1)
    edge_log: Optional[Path] = None
    record_timing: bool = False
    progress: bool = False
    profile: Optional[str] = None
    log_level: str = "INFO"
    input: Optional[Path] = None
    kind: str = "ratio"

    @field_validator("log_level")
    @classmethod
    def _check_level(cls, value: str) -> str:
        value = value.upper()
        if value not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"unknown log level {value!r}")
        return value

    @field_validator("kind")
    @classmethod
    def _check_kind(cls, value: str) -> str:
        if value not in ("ratio", "loglog"):
            raise ValueError(f"plot kind must be 'ratio' or 'loglog', got {value!r}")
        return value


def load_config_file(path: Union[str, Path]) -> Dict[str, Any]:
    """Read a flat key/value JSON document; keys use flag names with '_' or '-'."""
    with open(path, "r", encoding="utf-8") as handle:
        data = json.load(handle)
    if not isinstance(data, dict):
        raise ValueError(f"config file {path} must hold a JSON object")
    return {str(key).replace("-", "_"): value for key, value in data.items()}


def build_params(values: Mapping[str, Any], settings: Optional[Settings] = None) -> ModelParams:
    """
    ModelParams from merged flag values, filling the CLI defaults.

    Raises:
        ValueError: a required value (a, alpha) is missing or a value is invalid
    """
    settings = settings or get_settings()
    merged: Dict[str, Any] = dict(PARAM_DEFAULTS)
    merged["torus_delta"] = settings.torus_delta
    merged.update({key: values[key] for key in PARAM_KEYS if values.get(key) is not None})
    missing = [key for key in ("a", "alpha") if key not in merged]
    if missing:
        raise ValueError(f"missing required parameter(s): {', '.join('--' + key for key in missing)}")
    merged["m_dist"] = parse_m_dist(merged["m_dist"])
    if "n0" not in merged:
        merged["n0"] = max(8, len(merged["m_dist"]) + 1)
    return ModelParams(**merged)


def build_run_config(
    cli_values: Mapping[str, Any],
    need_params: bool = True,
    settings: Optional[Settings] = None,
) -> RunConfig:
    """
    Merge defaults < environment < config file < explicit flags.

    Args:
        cli_values: flags given on the command line (absent flags omitted),
            possibly with a ``config`` path
        need_params: build ModelParams (False for verify and plot)
        settings: environment settings; read lazily when omitted
    """
    settings = settings or get_settings()
    values: Dict[str, Any] = {
        "out": settings.output_dir,
        "jobs": settings.jobs,
        "progress": settings.progress,
        "log_level": settings.log_level,
    }
    config_path = cli_values.get("config")
    if config_path:
        file_values = load_config_file(config_path)
        unknown = sorted(set(file_values) - set(PARAM_KEYS) - set(RUN_KEYS))
        if unknown:
            raise ValueError(f"unknown keys in {config_path}: {unknown}")
        values.update(file_values)
        logger.debug("Loaded %d values from %s", len(file_values), config_path)
    values.update({key: value for key, value in cli_values.items() if key != "config" and value is not None})

    run_values = {key: values[key] for key in RUN_KEYS if key in values}
    params = None
    if need_params or any(key in values for key in ("a", "alpha")):
        params = build_params(values, settings)
    return RunConfig(params=params, **run_values)
