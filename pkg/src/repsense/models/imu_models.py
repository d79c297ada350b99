"""Pydantic models for raw IMU recordings and axis scaling."""

from enum import StrEnum
from typing import Iterator, List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

SAMPLING_RATE = 50.0
CHANNELS: Tuple[str, ...] = ("ax", "ay", "az", "gx", "gy", "gz")
STD_FLOOR = 1e-8


class Exercise(StrEnum):
    """Supported shoulder exercises."""

    SHOULDER_ABDUCTION = "ShoulderAbduction"
    EXTERNAL_ROTATION = "ExternalRotation"
    FORWARD_FLEXION = "ForwardFlexion"

    @property
    def is_half_arm_span(self) -> bool:
        """Whole-arm motions; external rotation moves the forearm only."""
        return self is not Exercise.EXTERNAL_ROTATION


class ImuSample(BaseModel):
    """One timestamped 6-axis sample."""

    model_config = ConfigDict(frozen=True)

    t: float = Field(description="Timestamp in seconds")
    accel: Tuple[float, float, float] = Field(description="Ax, Ay, Az in m/s^2")
    gyro: Tuple[float, float, float] = Field(description="Gx, Gy, Gz in rad/s")

    @model_validator(mode="after")
    def _finite(self) -> "ImuSample":
        if not np.all(np.isfinite([self.t, *self.accel, *self.gyro])):
            raise ValueError("IMU sample values must be finite")
        return self


class ImuRecording(BaseModel):
    """
    A full recording of one exercise set.

    The signal is stored as a (6, N) matrix with rows Ax, Ay, Az, Gx, Gy, Gz,
    which is the layout every signal operation consumes.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    recording_id: str = Field(description="Unique recording identifier")
    subject_id: str = Field(description="Opaque subject identifier")
    exercise: Exercise
    fs: float = Field(default=SAMPLING_RATE, description="Sampling rate in Hz")
    t: np.ndarray = Field(description="Timestamps in seconds, shape (N,)")
    signal: np.ndarray = Field(description="Signal matrix, shape (6, N)")

    @field_validator("t", "signal", mode="before")
    @classmethod
    def _as_float_array(cls, value) -> np.ndarray:
        return np.asarray(value, dtype=np.float64)

    @model_validator(mode="after")
    def _check(self) -> "ImuRecording":
        if self.fs != SAMPLING_RATE:
            raise ValueError(f"fs must be {SAMPLING_RATE:g} Hz, got {self.fs:g}")
        if self.signal.ndim != 2 or self.signal.shape[0] != 6:
            raise ValueError(f"signal must have shape (6, N), got {self.signal.shape}")
        n = self.signal.shape[1]
        if n < 1:
            raise ValueError("recording must contain at least one sample")
        if self.t.shape != (n,):
            raise ValueError(f"t must have shape ({n},), got {self.t.shape}")
        if not (np.all(np.isfinite(self.signal)) and np.all(np.isfinite(self.t))):
            raise ValueError("recording contains non-finite values")
        if n > 1:
            dt = np.diff(self.t)
            if np.any(dt < 0):
                raise ValueError("timestamps must be non-decreasing")
            nominal = 1.0 / self.fs
            if np.any(np.abs(dt - nominal) > 0.1 * nominal):
                raise ValueError("sample spacing deviates from 1/fs by more than 10%")
        return self

    @property
    def n_samples(self) -> int:
        return int(self.signal.shape[1])

    @property
    def samples(self) -> List[ImuSample]:
        return list(self.iter_samples())

    def iter_samples(self) -> Iterator[ImuSample]:
        for i in range(self.n_samples):
            col = self.signal[:, i]
            yield ImuSample(
                t=float(self.t[i]),
                accel=(float(col[0]), float(col[1]), float(col[2])),
                gyro=(float(col[3]), float(col[4]), float(col[5])),
            )

    @classmethod
    def from_samples(
        cls,
        samples: List[ImuSample],
        recording_id: str,
        subject_id: str,
        exercise: Exercise,
        fs: float = SAMPLING_RATE,
    ) -> "ImuRecording":
        t = np.array([s.t for s in samples], dtype=np.float64)
        signal = np.array([[*s.accel, *s.gyro] for s in samples], dtype=np.float64).T
        return cls(
            recording_id=recording_id,
            subject_id=subject_id,
            exercise=exercise,
            fs=fs,
            t=t,
            signal=signal.reshape(6, len(samples)),
        )


class FilterConfig(BaseModel):
    """Low-pass filter family settings."""

    model_config = ConfigDict(extra="forbid")

    order: int = Field(default=2, ge=1, le=8, description="Butterworth order")
    min_length: int = Field(
        default=16, ge=1, description="Shortest signal the filter accepts"
    )


class AxisScaler(BaseModel):
    """Per-axis standardisation statistics."""

    model_config = ConfigDict(frozen=True)

    mean: Tuple[float, float, float, float, float, float]
    std: Tuple[float, float, float, float, float, float]
    fit_source: str = Field(default="", description="Split the scaler was fit on")

    @field_validator("std")
    @classmethod
    def _positive(cls, value):
        if any(s <= 0 for s in value):
            raise ValueError("scaler std must be positive on every axis")
        return value

    @classmethod
    def identity(cls) -> "AxisScaler":
        return cls(mean=(0.0,) * 6, std=(1.0,) * 6, fit_source="identity")
