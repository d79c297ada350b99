"""Pydantic models for segmentation artifacts and similarity pairs."""

from typing import List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from repsense.models.imu_models import SAMPLING_RATE, Exercise
from repsense.models.quality_models import MetricKind, QualityLabel

Provenance = Literal["auto", "manual"]


class SegmentationConfig(BaseModel):
    """Energy function weights and cut proposal settings."""

    model_config = ConfigDict(extra="forbid")

    weights: Tuple[float, float, float] = Field(
        default=(1.0, 1.0, 1.0), description="Wx, Wy, Wz accelerometer weights"
    )
    smoothing: float = Field(default=1.0, gt=0, description="lambda smoothing factor")
    expected_reps: Optional[int] = Field(
        default=None, ge=1, description="Repetition count hint"
    )
    min_gap: int = Field(
        default=int(SAMPLING_RATE), ge=1, description="Minimum samples between cuts"
    )
    threshold_factor: float = Field(
        default=0.5,
        ge=0.0,
        le=1.0,
        description="Peak threshold = median + factor * (max - median)",
    )
    fs: float = Field(default=SAMPLING_RATE, gt=0)

    @field_validator("weights")
    @classmethod
    def _weights(cls, value):
        if any(w < 0 for w in value) or not any(w > 0 for w in value):
            raise ValueError("weights must be non-negative and not all zero")
        return value


class EnergySeries(BaseModel):
    """Energy curve of a recording."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    values: np.ndarray
    half_window: int = Field(ge=0)

    @field_validator("values", mode="before")
    @classmethod
    def _as_array(cls, value) -> np.ndarray:
        arr = np.asarray(value, dtype=np.float64)
        if arr.ndim != 1:
            raise ValueError("energy must be one-dimensional")
        if np.any(arr < 0):
            raise ValueError("energy must be non-negative")
        return arr

    def __len__(self) -> int:
        return int(self.values.shape[0])


class CutSet(BaseModel):
    """Interior repetition boundaries of a recording."""

    model_config = ConfigDict(frozen=True)

    recording_id: str = ""
    cuts: List[int] = Field(default_factory=list)
    provenance: List[Provenance] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check(self) -> "CutSet":
        if len(self.provenance) != len(self.cuts):
            raise ValueError("provenance must have one entry per cut")
        if any(b <= a for a, b in zip(self.cuts, self.cuts[1:])):
            raise ValueError("cuts must be strictly increasing")
        return self

    def validate_for(self, n_samples: int, min_gap: int = 1) -> "CutSet":
        """Check the cuts against a recording length and gap constraint."""
        if self.cuts and (self.cuts[0] <= 0 or self.cuts[-1] >= n_samples):
            raise ValueError(f"cuts must lie strictly inside [0, {n_samples})")
        if any(b - a < min_gap for a, b in zip(self.cuts, self.cuts[1:])):
            raise ValueError(f"consecutive cuts must be at least {min_gap} apart")
        return self


class Segment(BaseModel):
    """A slice of a recording holding one or more repetitions."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    segment_id: str
    recording_id: str
    subject_id: str
    exercise: Exercise
    start: int = Field(ge=0)
    stop: int
    signal: np.ndarray = Field(description="Signal matrix, shape (6, stop - start)")
    reps: int = Field(default=1, ge=1)
    label: Optional[QualityLabel] = None

    @field_validator("signal", mode="before")
    @classmethod
    def _as_array(cls, value) -> np.ndarray:
        return np.asarray(value, dtype=np.float64)

    @model_validator(mode="after")
    def _check(self) -> "Segment":
        if self.signal.ndim != 2 or self.signal.shape[0] != 6:
            raise ValueError(f"signal must have shape (6, L), got {self.signal.shape}")
        if self.signal.shape[1] != self.stop - self.start:
            raise ValueError("signal length must equal stop - start")
        return self

    @property
    def length(self) -> int:
        return int(self.signal.shape[1])


class SimilarityPair(BaseModel):
    """A signal/anchor pair with its ground-truth similarity."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    signal: Segment
    anchor: Segment
    metric: MetricKind
    label: float = Field(ge=0.0, le=1.0)

    @model_validator(mode="after")
    def _same_subject(self) -> "SimilarityPair":
        if self.signal.subject_id != self.anchor.subject_id:
            raise ValueError("pairs are only formed within one subject")
        return self
