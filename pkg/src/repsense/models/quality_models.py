"""Pydantic models for exercise quality labels and metric settings."""

from enum import StrEnum
from typing import Literal, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from repsense.models.imu_models import Exercise

HAS_DEGREES: Tuple[int, ...] = (30, 60, 90, 120, 150)
HHAS_DEGREES: Tuple[int, ...] = (45, 90, 150)
STABILITY_BINS: Tuple[float, float] = (0.33, 0.66)

# alternative spellings accepted for cv_mode
CV_MODE_ALIASES = {"paper": "inverted"}


class MetricKind(StrEnum):
    ROM = "ROM"
    STABILITY = "Stability"
    REPETITION = "Repetition"


def legal_degrees(exercise: Exercise) -> Tuple[int, ...]:
    """ROM class anchors for an exercise."""
    return HAS_DEGREES if exercise.is_half_arm_span else HHAS_DEGREES


class RomClass(BaseModel):
    """Discrete range-of-motion class."""

    model_config = ConfigDict(frozen=True)

    exercise: Exercise
    degrees: int = Field(description="Class anchor in degrees")

    @model_validator(mode="after")
    def _legal(self) -> "RomClass":
        allowed = legal_degrees(self.exercise)
        if self.degrees not in allowed:
            raise ValueError(
                f"{self.degrees} is not a ROM class of {self.exercise.value}: {allowed}"
            )
        return self

    @property
    def index(self) -> int:
        return legal_degrees(self.exercise).index(self.degrees)

    @classmethod
    def from_angle(cls, exercise: Exercise, angle: float) -> "RomClass":
        """Snap a measured angle to the nearest class; 150 and above collapse to 150."""
        allowed = legal_degrees(exercise)
        if angle >= allowed[-1]:
            return cls(exercise=exercise, degrees=allowed[-1])
        nearest = min(allowed, key=lambda d: (abs(d - angle), d))
        return cls(exercise=exercise, degrees=nearest)

    @staticmethod
    def num_classes(exercise: Exercise) -> int:
        return len(legal_degrees(exercise))


class MetricConfig(BaseModel):
    """Settings for the quality metrics and similarity ground truth."""

    model_config = ConfigDict(extra="forbid")

    max_rom: float = Field(default=150.0, gt=0, description="R, maximum ROM in degrees")
    max_reps: int = Field(default=3, ge=1, description="M, maximum repetition count")
    cutoff: float = Field(
        default=20.0, gt=0, lt=25, description="Low-pass cutoff for instability, Hz"
    )
    cv_mode: Literal["inverted", "standard"] = Field(
        default="standard",
        description="standard: sigma/mu; inverted (alias: paper): mu/sigma",
    )
    eps_floor: float = Field(
        default=0.2, gt=0, description="Floor applied to CV denominators, in signal units"
    )
    trend_cutoff: float | None = Field(
        default=4.0,
        gt=0,
        description="Motion trend cutoff in Hz; dispersion is measured around it. "
        "None measures dispersion around the channel mean.",
    )

    @field_validator("cv_mode", mode="before")
    @classmethod
    def _resolve_alias(cls, value):
        return CV_MODE_ALIASES.get(value, value)

    @model_validator(mode="after")
    def _trend_below_cutoff(self) -> "MetricConfig":
        if self.trend_cutoff is not None and self.trend_cutoff >= self.cutoff:
            raise ValueError("trend_cutoff must be below cutoff")
        return self


class QualityLabel(BaseModel):
    """Digitised quality metrics of one segment."""

    model_config = ConfigDict(frozen=True)

    rom: RomClass
    instability: float = Field(ge=0.0, le=1.0)
    reps: int = Field(default=1, ge=1)

    @property
    def stability_class(self) -> int:
        return stability_bin(self.instability)


def stability_bin(value: float) -> int:
    """Bin an instability score into stable / in-between / unstable."""
    low, high = STABILITY_BINS
    if value < low:
        return 0
    if value <= high:
        return 1
    return 2
