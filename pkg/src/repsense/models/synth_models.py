"""Pydantic models for the synthetic exercise generator."""

from typing import List, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from repsense.models.imu_models import Exercise
from repsense.models.quality_models import legal_degrees


class SubjectProfile(BaseModel):
    """Per-subject motion characteristics."""

    model_config = ConfigDict(frozen=True)

    subject_id: str
    arm_length_scale: float = Field(default=1.0, ge=0.8, le=1.2)
    tempo: float = Field(default=2.5, ge=1.5, le=4.0, description="Seconds per rep")
    amplitude_jitter: float = Field(default=0.0, ge=0.0, le=0.1)
    rng_seed: int = Field(default=0, ge=0)


class SynthSpec(BaseModel):
    """What a single synthetic recording should contain."""

    model_config = ConfigDict(frozen=True)

    exercise: Exercise
    rom_degrees: int
    tremor_level: float = Field(default=0.0, ge=0.0, le=1.0)
    reps: int = Field(default=10, ge=1)
    profile: SubjectProfile
    replicate: int = Field(default=0, ge=0, description="Index within a corpus cell")

    @model_validator(mode="after")
    def _legal_rom(self) -> "SynthSpec":
        if self.rom_degrees not in legal_degrees(self.exercise):
            raise ValueError(
                f"rom {self.rom_degrees} is not legal for {self.exercise.value}"
            )
        return self

    @property
    def recording_id(self) -> str:
        tremor = int(round(self.tremor_level * 100))
        return (
            f"{self.profile.subject_id}-{self.exercise.value}"
            f"-rom{self.rom_degrees:03d}-tr{tremor:03d}-r{self.replicate}"
        )


class SynthConfig(BaseModel):
    """Corpus generation settings."""

    model_config = ConfigDict(extra="forbid")

    n_subjects: int = Field(default=10, ge=2)
    per_cell: int = Field(default=2, ge=1)
    reps: int = Field(default=10, ge=1)
    tremor_levels: Tuple[float, ...] = Field(default=(0.0, 0.5, 1.0), min_length=1)
    exercises: Tuple[Exercise, ...] = Field(
        default=(Exercise.SHOULDER_ABDUCTION,), min_length=1
    )


class CorpusEntry(BaseModel):
    """One recording listed in a corpus manifest."""

    recording_id: str
    subject_id: str
    exercise: Exercise
    rom_degrees: int
    tremor_level: float
    reps: int
    csv: str
    sidecar: str
    true_cuts: List[int]
    instability: float


class CorpusManifest(BaseModel):
    """Index of a generated (or ingested) corpus."""

    seed: int
    recordings: List[CorpusEntry] = Field(default_factory=list)

    @property
    def subjects(self) -> List[str]:
        return sorted({e.subject_id for e in self.recordings})
