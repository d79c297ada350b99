"""Parameter and ablation studies run through cross-validation."""

import logging
from pathlib import Path
from typing import Any, Dict, List, Sequence

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field

from repsense.errors import ParameterError
from repsense.models import (
    Exercise,
    MetricConfig,
    MetricKind,
    ModelConfig,
    Segment,
    TrainConfig,
)
from repsense.training.evaluation import cross_validate
from repsense.training.splits import split
from repsense.utils.dataset import build_dataset, expand_repetitions

logger = logging.getLogger(__name__)


class StudyVariant(BaseModel):
    """One configuration of a study grid."""

    name: str
    model: Dict[str, Any] = Field(default_factory=dict, description="ModelConfig overrides")
    train: Dict[str, Any] = Field(default_factory=dict, description="TrainConfig overrides")
    merge_size: int = Field(default=1, ge=1, description="Repetitions per input segment")


STUDIES: Dict[str, List[StudyVariant]] = {
    "window": [
        StudyVariant(name=f"k{k}-step{step}", model={"window": k, "step": step})
        for k in (50, 100, 150)
        for step in (15, 30)
    ],
    "padding": [
        StudyVariant(name=side, model={"padding": side}) for side in ("front", "back")
    ],
    "dropout": [
        StudyVariant(name=f"dropout{rate:g}", model={"dropout": rate}) for rate in (0.0, 0.2, 0.5)
    ],
    "repetition": [
        StudyVariant(name=f"{n}rep", merge_size=n) for n in (1, 2, 3)
    ],
    "ablation": [
        StudyVariant(name="full"),
        StudyVariant(name="no-spatial", model={"use_spatial": False}),
        StudyVariant(name="no-temporal", model={"use_temporal": False}),
        StudyVariant(name="no-attention", model={"use_attention": False}),
    ],
}


class StudyRow(BaseModel):
    study: str
    variant: str
    mean_r2: float | None
    pooled_r2: float | None
    accuracy: float


def run_study(
    name: str,
    segments: Sequence[Segment],
    metric: MetricKind,
    metric_cfg: MetricConfig,
    model_cfg: ModelConfig,
    train_cfg: TrainConfig,
    mode: str = "loocv",
    exercise: Exercise | None = None,
    jobs: int = 1,
) -> List[StudyRow]:
    """
    Cross-validate every variant of a named study.

    Merged-repetition variants score the chosen metric on n-rep inputs and
    widen max_length to the longest merged segment when needed.
    """
    if name not in STUDIES:
        raise ParameterError(f"unknown study {name!r}; choose from {sorted(STUDIES)}")

    rows = []
    for variant in STUDIES[name]:
        inputs = list(segments)
        if variant.merge_size > 1:
            inputs = expand_repetitions(inputs, (variant.merge_size,))
        dataset = build_dataset(inputs, metric, metric_cfg, exercise=exercise)

        overrides = dict(variant.model)
        longest = max(s.length for s in dataset.segments)
        if longest > model_cfg.max_length and "max_length" not in overrides:
            overrides["max_length"] = longest
        cfg = ModelConfig.model_validate({**model_cfg.model_dump(), **overrides})
        tcfg = TrainConfig.model_validate({**train_cfg.model_dump(), **variant.train})

        logger.info("🧪 Study %s: variant %s", name, variant.name)
        plan = split(dataset.segments, mode, tcfg.seed)
        report = cross_validate(dataset, plan, cfg, tcfg, jobs=jobs)
        fold_r2 = [f.scores.r2 for f in report.folds if f.scores.r2 is not None]
        rows.append(
            StudyRow(
                study=name,
                variant=variant.name,
                mean_r2=float(np.mean(fold_r2)) if fold_r2 else None,
                pooled_r2=report.scores[metric.value].r2,
                accuracy=report.accuracy,
            )
        )
    return rows


def write_study(rows: Sequence[StudyRow], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame([r.model_dump() for r in rows], columns=list(StudyRow.model_fields))
    frame.to_csv(path, index=False, float_format="%.6f", lineterminator="\n")
    return path
