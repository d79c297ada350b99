"""Pydantic models for split plans, training settings and reports."""

from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from repsense.models.imu_models import Exercise
from repsense.models.quality_models import MetricKind

SplitRole = Literal["train", "val", "test"]


class TrainConfig(BaseModel):
    """Optimisation loop settings."""

    model_config = ConfigDict(extra="forbid")

    batch_size: int = Field(default=1024, ge=1)
    lr: float = Field(default=1e-3, gt=0)
    betas: Tuple[float, float] = (0.9, 0.999)
    epochs: int = Field(default=50, ge=1)
    alpha: float = Field(default=1.0, ge=0.0, description="Classification loss weight")
    seed: int = 0
    patience: int = Field(default=10, ge=1, description="Early-stop patience (epochs)")
    pair_fraction: float = Field(
        default=0.1, gt=0.0, le=1.0, description="Share of train pairs per epoch"
    )
    metric: MetricKind = MetricKind.ROM
    exercise: Optional[Exercise] = Field(
        default=None, description="Exercise to train on; required for mixed corpora"
    )
    split: Literal["loocv", "standard"] = "loocv"
    repetition_sizes: Tuple[int, ...] = Field(
        default=(1, 2, 3), description="Merged sizes used for the repetition metric"
    )
    deterministic: bool = Field(
        default=True, description="Single-threaded deterministic torch kernels"
    )


class Fold(BaseModel):
    """Role assignment of every segment for one fold."""

    fold_id: int
    held_out: Optional[str] = Field(default=None, description="LOOCV test subject")
    assignments: Dict[str, SplitRole]

    def ids(self, role: SplitRole) -> List[str]:
        return sorted(k for k, v in self.assignments.items() if v == role)


class SplitPlan(BaseModel):
    """Folds for LOOCV or a single standard 70/10/20 split."""

    mode: Literal["loocv", "standard"]
    seed: int
    folds: List[Fold]


class MetricScores(BaseModel):
    mse: float
    mae: float
    r2: Optional[float] = Field(default=None, le=1.0, description="None when the targets are constant")


class FoldReport(BaseModel):
    fold_id: int
    held_out: Optional[str] = None
    scores: MetricScores
    accuracy: float
    n_test_pairs: int


class EvalReport(BaseModel):
    """Evaluation summary across folds."""

    metric: MetricKind
    scores: Dict[str, MetricScores]
    confusion: List[List[int]]
    folds: List[FoldReport] = Field(default_factory=list)
    runtime_seconds: float = 0.0

    @model_validator(mode="after")
    def _square(self) -> "EvalReport":
        if any(len(row) != len(self.confusion) for row in self.confusion):
            raise ValueError("confusion matrix must be square")
        return self

    @property
    def accuracy(self) -> float:
        total = sum(sum(row) for row in self.confusion)
        if total == 0:
            return 0.0
        return sum(self.confusion[i][i] for i in range(len(self.confusion))) / total
