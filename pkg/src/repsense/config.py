import json
import os
import tomllib
from pathlib import Path
from typing import Any, Dict, Literal

from pydantic import BaseModel, ConfigDict, Field

from repsense.errors import DataError, ParameterError
from repsense.models import (
    FilterConfig,
    MetricConfig,
    ModelConfig,
    SegmentationConfig,
    SynthConfig,
    TrainConfig,
)

LogLevel = Literal["DEBUG", "INFO", "WARNING", "ERROR"]

ENV_PREFIX = "REPSENSE_"


class AppConfig(BaseModel):
    """All settings of a repsense run."""

    model_config = ConfigDict(extra="forbid")

    seed: int = 0
    out_dir: Path = Path("out")
    log_level: LogLevel = "INFO"
    num_threads: int = Field(default=1, ge=1)
    filter: FilterConfig = Field(default_factory=FilterConfig)
    segmentation: SegmentationConfig = Field(default_factory=SegmentationConfig)
    metrics: MetricConfig = Field(default_factory=MetricConfig)
    model: ModelConfig = Field(default_factory=ModelConfig)
    train: TrainConfig = Field(default_factory=TrainConfig)
    synth: SynthConfig = Field(default_factory=SynthConfig)


def read_config_file(path: str | Path) -> Dict[str, Any]:
    """
    Read a TOML or JSON config file into a plain dict.

    Args:
        path: File ending in .toml or .json

    Returns:
        Nested dict matching the AppConfig layout.
    """
    path = Path(path)
    if path.suffix not in (".toml", ".json"):
        raise ParameterError(f"Unsupported config format: {path.suffix}. Use .toml or .json")
    try:
        if path.suffix == ".toml":
            with open(path, "rb") as f:
                return tomllib.load(f)
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except OSError as e:
        raise DataError(f"cannot read config: {e.strerror}", path=str(path)) from e
    except tomllib.TOMLDecodeError as e:
        raise DataError(f"invalid TOML: {e}", path=str(path)) from e
    except json.JSONDecodeError as e:
        raise DataError(f"invalid JSON: {e.msg}", path=str(path), line=e.lineno) from e


def env_overrides() -> Dict[str, Any]:
    """Collect REPSENSE_* environment variables (call load_dotenv first)."""
    overrides: Dict[str, Any] = {}
    for key in ("seed", "out_dir", "log_level", "num_threads"):
        value = os.getenv(ENV_PREFIX + key.upper())
        if value:
            overrides[key] = value
    return overrides


def deep_merge(base: Dict[str, Any], update: Dict[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in update.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_config(
    path: str | Path | None = None, overrides: Dict[str, Any] | None = None
) -> AppConfig:
    """
    Build the effective config: defaults < file < environment < overrides.

    Args:
        path: Optional TOML/JSON config file
        overrides: Nested dict of explicit values (usually CLI flags)
    """
    data: Dict[str, Any] = {}
    if path is not None:
        data = read_config_file(path)
    data = deep_merge(data, env_overrides())
    if overrides:
        data = deep_merge(data, overrides)
    return AppConfig.model_validate(data)
