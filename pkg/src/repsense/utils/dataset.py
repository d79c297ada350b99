"""Corpus loading and training dataset assembly."""

import json
import logging
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Collection, Dict, Iterable, Iterator, List, NamedTuple, Sequence

import numpy as np
from pydantic import ValidationError

from repsense.errors import DataError, ParameterError
from repsense.imu.io import read_recording
from repsense.metrics.pairs import group_by_subject, label_segment, merge_repetitions, pair_matrix
from repsense.models import (
    STABILITY_BINS,
    CorpusManifest,
    CutSet,
    Exercise,
    ImuRecording,
    MetricConfig,
    MetricKind,
    QualityLabel,
    RomClass,
    Segment,
)
from repsense.segmentation.cuts import split

logger = logging.getLogger(__name__)


def read_manifest(path: str | Path) -> CorpusManifest:
    path = Path(path)
    try:
        return CorpusManifest.model_validate(json.loads(path.read_text(encoding="utf-8")))
    except OSError as e:
        raise DataError(f"cannot read manifest: {e.strerror}", path=str(path)) from e
    except json.JSONDecodeError as e:
        raise DataError(f"bad manifest JSON: {e.msg}", path=str(path), line=e.lineno) from e
    except ValidationError as e:
        raise DataError(f"invalid manifest: {e}", path=str(path)) from e


def load_recordings(corpus_dir: str | Path, manifest: CorpusManifest) -> Dict[str, ImuRecording]:
    corpus_dir = Path(corpus_dir)
    return {
        e.recording_id: read_recording(
            corpus_dir / e.csv, corpus_dir / e.sidecar, recording_id=e.recording_id
        )
        for e in manifest.recordings
    }


def true_cuts(manifest: CorpusManifest) -> Dict[str, CutSet]:
    """Ground-truth boundaries stored by the generator."""
    return {
        e.recording_id: CutSet(
            recording_id=e.recording_id,
            cuts=e.true_cuts,
            provenance=["manual"] * len(e.true_cuts),
        )
        for e in manifest.recordings
    }


def label_recordings(
    recordings: Dict[str, ImuRecording],
    cuts: Dict[str, CutSet],
    rom_degrees: Dict[str, int],
    cfg: MetricConfig,
) -> List[Segment]:
    """
    Split every recording at its cuts and label each segment.

    Raises:
        ParameterError: A recording has no ROM label
    """
    segments = []
    for rec_id, rec in recordings.items():
        if rec_id not in rom_degrees:
            raise ParameterError(f"no ROM label for {rec_id}; pass --rom or use a manifest")
        rom = RomClass(exercise=rec.exercise, degrees=rom_degrees[rec_id])
        for seg in split(rec, cuts.get(rec_id, CutSet(recording_id=rec_id))):
            segments.append(label_segment(seg, rom, cfg))
    return segments


def segments_from_labels(
    records: Iterable[dict], recordings: Dict[str, ImuRecording]
) -> List[Segment]:
    """Rebuild labelled segments from label records and their source recordings."""
    segments = []
    for r in records:
        rec = recordings.get(r["recording_id"])
        if rec is None:
            raise DataError(f"label references unknown recording {r['recording_id']}")
        try:
            exercise = Exercise(r["exercise"])
            label = QualityLabel(
                rom=RomClass(exercise=exercise, degrees=r["rom_degrees"]),
                instability=r["instability"],
                reps=r["reps"],
            )
            segments.append(
                Segment(
                    segment_id=r["segment_id"],
                    recording_id=rec.recording_id,
                    subject_id=r["subject_id"],
                    exercise=exercise,
                    start=r["start"],
                    stop=r["stop"],
                    signal=rec.signal[:, r["start"] : r["stop"]],
                    reps=r["reps"],
                    label=label,
                )
            )
        except (KeyError, ValueError, ValidationError) as e:
            raise DataError(f"bad label record {r.get('segment_id', '?')}: {e}") from e
    return segments


def class_target(segment: Segment, metric: MetricKind) -> int:
    """Classification target: ROM class index, stability bin, or reps - 1."""
    label = segment.label
    if label is None:
        raise ParameterError(f"segment {segment.segment_id} has no label")
    if metric is MetricKind.ROM:
        return label.rom.index
    if metric is MetricKind.STABILITY:
        return label.stability_class
    return label.reps - 1


def num_classes_for(metric: MetricKind, exercise: Exercise, cfg: MetricConfig) -> int:
    if metric is MetricKind.ROM:
        return RomClass.num_classes(exercise)
    if metric is MetricKind.STABILITY:
        return len(STABILITY_BINS) + 1
    return cfg.max_reps


class PairIndex(NamedTuple):
    """Within-subject pairs as positions into Dataset.segments."""

    signal: np.ndarray
    anchor: np.ndarray
    label: np.ndarray

    def __len__(self) -> int:
        return int(self.label.shape[0])

    def take(self, rows: np.ndarray) -> "PairIndex":
        return PairIndex(self.signal[rows], self.anchor[rows], self.label[rows])


@dataclass
class Dataset:
    segments: List[Segment]
    pairs: PairIndex
    targets: np.ndarray
    metric: MetricKind
    exercise: Exercise
    num_classes: int

    def positions(self, ids: Collection[str]) -> np.ndarray:
        wanted = set(ids)
        return np.array(
            [i for i, s in enumerate(self.segments) if s.segment_id in wanted], dtype=np.int64
        )

    def pairs_within(self, ids: Collection[str]) -> PairIndex:
        """Pairs whose signal and anchor both belong to ids."""
        inside = np.zeros(len(self.segments), dtype=bool)
        inside[self.positions(ids)] = True
        rows = np.flatnonzero(inside[self.pairs.signal] & inside[self.pairs.anchor])
        return self.pairs.take(rows)


def expand_repetitions(segments: Sequence[Segment], sizes: Sequence[int]) -> List[Segment]:
    """Add merged n-rep segments for every size, per recording in time order."""
    by_recording: Dict[str, List[Segment]] = defaultdict(list)
    for seg in segments:
        by_recording[seg.recording_id].append(seg)
    expanded = []
    for rec_id in sorted(by_recording):
        ordered = sorted(by_recording[rec_id], key=lambda s: s.start)
        for n in sizes:
            expanded.extend(merge_repetitions(ordered, n))
    return expanded


def build_dataset(
    segments: Sequence[Segment],
    metric: MetricKind,
    cfg: MetricConfig,
    exercise: Exercise | None = None,
    repetition_sizes: Sequence[int] = (1,),
) -> Dataset:
    """
    Assemble labelled segments, class targets and every within-subject pair.

    Args:
        segments: Labelled one-rep segments
        metric: Similarity metric the pair labels follow
        exercise: Keep only this exercise; required when several are present
        repetition_sizes: Merge sizes for the repetition metric
    """
    exercises = sorted({s.exercise for s in segments})
    if exercise is None:
        if len(exercises) != 1:
            raise ParameterError(
                f"segments cover {len(exercises)} exercises; choose one with --exercise"
            )
        exercise = exercises[0]
    chosen = [s for s in segments if s.exercise == exercise]
    if metric is MetricKind.REPETITION:
        chosen = expand_repetitions(chosen, repetition_sizes)
    if not chosen:
        raise ParameterError(f"no labelled segments for {exercise.value}")

    position = {s.segment_id: i for i, s in enumerate(chosen)}
    signal, anchor, labels = [], [], []
    for group in group_by_subject(chosen).values():
        idx = np.array([position[s.segment_id] for s in group], dtype=np.int64)
        matrix = pair_matrix(group, metric, cfg)
        signal.append(np.repeat(idx, len(idx)))
        anchor.append(np.tile(idx, len(idx)))
        labels.append(matrix.ravel())

    pairs = PairIndex(np.concatenate(signal), np.concatenate(anchor), np.concatenate(labels))
    targets = np.array([class_target(s, metric) for s in chosen], dtype=np.int64)
    logger.info(
        "📦 Dataset: %d segments, %d pairs (%s, %s)", len(chosen), len(pairs), metric.value, exercise.value
    )
    return Dataset(
        segments=chosen,
        pairs=pairs,
        targets=targets,
        metric=metric,
        exercise=exercise,
        num_classes=num_classes_for(metric, exercise, cfg),
    )


def pair_records(dataset: Dataset) -> Iterator[dict]:
    """Pair manifest records for every within-subject pair."""
    ids = [s.segment_id for s in dataset.segments]
    subjects = [s.subject_id for s in dataset.segments]
    for i, j, label in zip(dataset.pairs.signal.tolist(), dataset.pairs.anchor.tolist(), dataset.pairs.label.tolist()):
        yield {
            "signal_id": ids[i],
            "anchor_id": ids[j],
            "subject_id": subjects[i],
            "metric": dataset.metric.value,
            "label": label,
        }
