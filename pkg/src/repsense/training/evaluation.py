"""
Regression and classification metrics, cross-validation and report files.

The metric functions validate their inputs and delegate the arithmetic to
scikit-learn.
"""

import logging
import multiprocessing
import time
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from itertools import repeat
from pathlib import Path
from typing import List, NamedTuple, Sequence

import numpy as np
import pandas as pd
import torch
from sklearn.metrics import confusion_matrix, mean_absolute_error, mean_squared_error, r2_score

from repsense.errors import MetricError
from repsense.imu.io import write_json
from repsense.models import (
    EvalReport,
    Fold,
    FoldReport,
    MetricKind,
    MetricScores,
    ModelConfig,
    SplitPlan,
    TrainConfig,
    legal_degrees,
)
from repsense.training.trainer import TrainResult, encode_positions, predict_pairs, train, window_cache
from repsense.utils.dataset import Dataset
from repsense.utils.logging_setup import setup_logging
from repsense.utils.plotting import plot_confusion

logger = logging.getLogger(__name__)


def _vectors(y, y_hat, minimum: int):
    y = np.asarray(y, dtype=np.float64).ravel()
    y_hat = np.asarray(y_hat, dtype=np.float64).ravel()
    if y.shape != y_hat.shape:
        raise MetricError(f"length mismatch: {y.size} targets, {y_hat.size} predictions")
    if y.size < minimum:
        raise MetricError(f"need at least {minimum} values, got {y.size}")
    return y, y_hat


def r_squared(y, y_hat) -> float:
    """1 - sum((y - y_hat)^2) / sum((y - mean(y))^2)."""
    y, y_hat = _vectors(y, y_hat, 2)
    if np.all(y == y[0]):
        raise MetricError("R-squared is undefined for constant targets")
    return float(r2_score(y, y_hat))


def mse(y, y_hat) -> float:
    y, y_hat = _vectors(y, y_hat, 1)
    return float(mean_squared_error(y, y_hat))


def mae(y, y_hat) -> float:
    y, y_hat = _vectors(y, y_hat, 1)
    return float(mean_absolute_error(y, y_hat))


def confusion(y_class, y_hat_class, num_classes: int) -> np.ndarray:
    """counts[i][j] = number of samples with true class i predicted as j."""
    y = np.asarray(y_class).ravel()
    y_hat = np.asarray(y_hat_class).ravel()
    if y.shape != y_hat.shape:
        raise MetricError("class vectors differ in length")
    for values in (y, y_hat):
        if values.size and (values.min() < 0 or values.max() >= num_classes):
            raise MetricError(f"class labels must lie in [0, {num_classes})")
    return confusion_matrix(y, y_hat, labels=list(range(num_classes)))


def scores(y, y_hat) -> MetricScores:
    try:
        r2 = r_squared(y, y_hat)
    except MetricError:
        r2 = None
    return MetricScores(mse=mse(y, y_hat), mae=mae(y, y_hat), r2=r2)


def class_names(dataset: Dataset) -> List[str]:
    if dataset.metric is MetricKind.ROM:
        return [f"{d}°" for d in legal_degrees(dataset.exercise)]
    if dataset.metric is MetricKind.STABILITY:
        return ["stable", "mid", "unstable"]
    return [f"{r} rep" for r in range(1, dataset.num_classes + 1)]


class FoldOutcome(NamedTuple):
    report: FoldReport
    y: np.ndarray
    y_hat: np.ndarray
    classes: np.ndarray
    predicted: np.ndarray


@torch.no_grad()
def predict_classes(model, windows: torch.Tensor, positions: np.ndarray) -> np.ndarray:
    pooled = encode_positions(model, windows, positions)
    logits = model.classifier(torch.stack([pooled[i] for i in positions.tolist()]))
    return logits.argmax(dim=-1).numpy()


def evaluate_fold(result: TrainResult, dataset: Dataset, fold: Fold) -> FoldOutcome:
    """Score a trained model on the fold's test pairs and test segments."""
    test_ids = fold.ids("test")
    pairs = dataset.pairs_within(test_ids)
    if len(pairs) == 0:
        raise MetricError(f"fold {fold.fold_id} has no test pairs")
    windows = window_cache(dataset, result.model.config, result.scaler, next(result.model.parameters()).dtype)
    y_hat = predict_pairs(result.model, windows, pairs)
    positions = dataset.positions(test_ids)
    predicted = predict_classes(result.model, windows, positions)
    classes = dataset.targets[positions]
    report = FoldReport(
        fold_id=fold.fold_id,
        held_out=fold.held_out,
        scores=scores(pairs.label, y_hat),
        accuracy=float(np.mean(predicted == classes)),
        n_test_pairs=len(pairs),
    )
    return FoldOutcome(report, pairs.label, y_hat, classes, predicted)


def run_fold(dataset: Dataset, fold: Fold, model_cfg: ModelConfig, train_cfg: TrainConfig) -> FoldOutcome:
    logger.info("🔁 Fold %d (held out: %s)", fold.fold_id, fold.held_out or "none")
    result = train(dataset, fold, model_cfg, train_cfg)
    outcome = evaluate_fold(result, dataset, fold)
    logger.info("✅ Fold %d: R² %s, accuracy %.3f", fold.fold_id, outcome.report.scores.r2, outcome.report.accuracy)
    return outcome


def cross_validate(
    dataset: Dataset,
    plan: SplitPlan,
    model_cfg: ModelConfig,
    train_cfg: TrainConfig,
    jobs: int = 1,
) -> EvalReport:
    """
    Train and test one model per fold and pool the results.

    Args:
        jobs: Folds trained concurrently in worker processes. Each fold
            reseeds its own process, so results match jobs=1 whenever the
            kernels are deterministic (TrainConfig.deterministic)

    Returns:
        EvalReport with pooled scores, the pooled confusion matrix and one
        row per fold.
    """
    started = time.perf_counter()
    if jobs > 1:
        # torch is not fork-safe once its thread pool has started
        context = multiprocessing.get_context("spawn")
        level = logging.getLevelName(logging.getLogger().getEffectiveLevel())
        with ProcessPoolExecutor(
            max_workers=jobs, mp_context=context, initializer=setup_logging, initargs=(level,)
        ) as pool:
            outcomes = list(
                pool.map(partial(run_fold, dataset), plan.folds, repeat(model_cfg), repeat(train_cfg))
            )
    else:
        outcomes = [run_fold(dataset, f, model_cfg, train_cfg) for f in plan.folds]

    y = np.concatenate([o.y for o in outcomes])
    y_hat = np.concatenate([o.y_hat for o in outcomes])
    matrix = confusion(
        np.concatenate([o.classes for o in outcomes]),
        np.concatenate([o.predicted for o in outcomes]),
        dataset.num_classes,
    )
    return EvalReport(
        metric=dataset.metric,
        scores={dataset.metric.value: scores(y, y_hat)},
        confusion=matrix.tolist(),
        folds=[o.report for o in outcomes],
        runtime_seconds=time.perf_counter() - started,
    )


def report_table(report: EvalReport) -> pd.DataFrame:
    """MSE / MAE / R-Square per fold plus the pooled row."""
    rows = [
        {
            "metric": report.metric.value,
            "fold": str(f.held_out or f.fold_id),
            "MSE": f.scores.mse,
            "MAE": f.scores.mae,
            "R-Square": f.scores.r2,
            "accuracy": f.accuracy,
        }
        for f in report.folds
    ]
    for metric, s in report.scores.items():
        rows.append(
            {"metric": metric, "fold": "all", "MSE": s.mse, "MAE": s.mae, "R-Square": s.r2, "accuracy": report.accuracy}
        )
    return pd.DataFrame(rows, columns=["metric", "fold", "MSE", "MAE", "R-Square", "accuracy"])


def write_report(report: EvalReport, out_dir: str | Path, labels: Sequence[str] | None = None) -> Path:
    """Write report.json, report.csv, confusion.csv and confusion.svg."""
    out_dir = Path(out_dir)
    write_json(out_dir / "report.json", report.model_dump(mode="json"))
    report_table(report).to_csv(out_dir / "report.csv", index=False, float_format="%.6f", lineterminator="\n")
    labels = list(labels) if labels else [str(i) for i in range(len(report.confusion))]
    pd.DataFrame(report.confusion, index=labels, columns=labels).to_csv(
        out_dir / "confusion.csv", lineterminator="\n"
    )
    plot_confusion(report.confusion, labels, out_dir / "confusion.svg")
    return out_dir

