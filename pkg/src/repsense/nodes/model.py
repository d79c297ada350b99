"""Node functions for training and evaluating the Siamese network."""

from pathlib import Path
from typing import Any, Dict

from repsense.config import AppConfig
from repsense.errors import ParameterError
from repsense.metrics.pairs import read_labels
from repsense.network.checkpoint import save_checkpoint
from repsense.training.evaluation import class_names, cross_validate, write_report
from repsense.training.splits import split
from repsense.training.trainer import train
from repsense.utils.dataset import Dataset, build_dataset, load_recordings, read_manifest, segments_from_labels


def load_dataset(state: Dict[str, Any], config: AppConfig) -> Dataset:
    manifest = read_manifest(state["manifest_path"])
    recordings = load_recordings(state["corpus_dir"], manifest)
    segments = segments_from_labels(read_labels(state["labels_path"]), recordings)
    return build_dataset(
        segments,
        config.train.metric,
        config.metrics,
        exercise=config.train.exercise,
        repetition_sizes=config.train.repetition_sizes,
    )


def train_node(state: Dict[str, Any], config: AppConfig) -> Dict[str, Any]:
    """
    Train on one fold of the configured split and save the best checkpoint.

    Args:
        state: Pipeline state with manifest_path, corpus_dir, labels_path
            and optionally fold.
        config: Run configuration.

    Returns:
        Dict with checkpoint_path and the per-epoch history.
    """
    dataset = load_dataset(state, config)
    plan = split(dataset.segments, config.train.split, config.train.seed)
    fold_index = state.get("fold", 0)
    if not 0 <= fold_index < len(plan.folds):
        raise ParameterError(f"fold {fold_index} does not exist; the plan has {len(plan.folds)} folds")
    fold = plan.folds[fold_index]
    result = train(dataset, fold, config.model, config.train)
    checkpoint_path = Path(
        state.get("checkpoint_path") or Path(state.get("out_dir") or config.out_dir) / "model.ckpt"
    )
    save_checkpoint(
        result.model,
        checkpoint_path,
        scaler=result.scaler,
        metadata={
            "metric": dataset.metric.value,
            "exercise": dataset.exercise.value,
            "classes": class_names(dataset),
            "fold": fold.fold_id,
            "best_epoch": result.best_epoch,
        },
    )
    print(f"💾 Saved checkpoint to {checkpoint_path} (best epoch {result.best_epoch})")
    return {"checkpoint_path": str(checkpoint_path), "history": result.history}


def evaluate_node(state: Dict[str, Any], config: AppConfig, jobs: int = 1) -> Dict[str, Any]:
    """Cross-validate over the configured split and write the report files."""
    dataset = load_dataset(state, config)
    plan = split(dataset.segments, config.train.split, config.train.seed)
    report = cross_validate(dataset, plan, config.model, config.train, jobs=jobs)
    report_dir = Path(state.get("out_dir") or config.out_dir) / "report"
    write_report(report, report_dir, labels=class_names(dataset))
    print(f"📊 {dataset.metric.value}: accuracy {report.accuracy:.3f}, report in {report_dir}")
    return {
        "report_dir": str(report_dir),
        "scores": {k: v.model_dump() for k, v in report.scores.items()},
    }
