"""Split plans, loss, training loop, evaluation and studies."""

from repsense.training.evaluation import (
    confusion,
    cross_validate,
    mae,
    mse,
    r_squared,
    write_report,
)
from repsense.training.losses import loss
from repsense.training.splits import split
from repsense.training.studies import STUDIES, run_study, write_study
from repsense.training.trainer import TrainResult, train, train_all

__all__ = [
    "confusion",
    "cross_validate",
    "mae",
    "mse",
    "r_squared",
    "write_report",
    "loss",
    "split",
    "STUDIES",
    "run_study",
    "write_study",
    "TrainResult",
    "train",
    "train_all",
]
