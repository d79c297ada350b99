"""Similarity pair construction, repetition merging and label files."""

import json
from collections import defaultdict
from itertools import product
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np

from repsense.errors import DataError, ParameterError
from repsense.imu.io import write_json
from repsense.metrics.quality import (
    instability,
    sim_repetition,
    sim_rom,
    sim_stability_scores,
)
from repsense.models import (
    MetricConfig,
    MetricKind,
    QualityLabel,
    RomClass,
    Segment,
    SimilarityPair,
)


def label_segment(segment: Segment, rom: RomClass | None, cfg: MetricConfig) -> Segment:
    """Attach a label, measuring instability from the segment itself."""
    if rom is None:
        raise ParameterError(f"no ROM label available for {segment.segment_id}")
    label = QualityLabel(
        rom=rom,
        instability=instability(segment.signal, cfg),
        reps=segment.reps,
    )
    return segment.model_copy(update={"label": label})


def _require_label(segment: Segment) -> QualityLabel:
    if segment.label is None:
        raise ParameterError(f"segment {segment.segment_id} has no label")
    return segment.label


def pair_label(a: Segment, b: Segment, metric: MetricKind, cfg: MetricConfig) -> float:
    la, lb = _require_label(a), _require_label(b)
    if metric is MetricKind.ROM:
        value = sim_rom(la.rom.degrees, lb.rom.degrees, cfg)
    elif metric is MetricKind.STABILITY:
        value = sim_stability_scores(la.instability, lb.instability)
    else:
        value = sim_repetition(la.reps, lb.reps, cfg)
    return float(np.clip(value, 0.0, 1.0))


def group_by_subject(segments: Iterable[Segment]) -> Dict[Tuple[str, str], List[Segment]]:
    groups: Dict[Tuple[str, str], List[Segment]] = defaultdict(list)
    for seg in segments:
        groups[(seg.subject_id, seg.exercise.value)].append(seg)
    return dict(sorted(groups.items()))


def build_pairs(
    segments: Sequence[Segment], metric: MetricKind, cfg: MetricConfig
) -> List[SimilarityPair]:
    """
    All ordered within-subject pairs, self-pairs included.

    Segments of one subject are only paired with segments of the same
    exercise; nothing is paired across subjects.
    """
    pairs: List[SimilarityPair] = []
    for group in group_by_subject(segments).values():
        for signal, anchor in product(group, repeat=2):
            pairs.append(
                SimilarityPair(
                    signal=signal,
                    anchor=anchor,
                    metric=metric,
                    label=pair_label(signal, anchor, metric, cfg),
                )
            )
    return pairs


def merge_repetitions(segments: Sequence[Segment], n: int) -> List[Segment]:
    """
    Concatenate every run of n adjacent segments into one n-rep segment.

    Groups slide by one segment, so 10 one-rep segments give 9 two-rep
    segments. Runs broken by a gap or a recording change are skipped.
    """
    if n < 1:
        raise ParameterError("merge size must be at least 1")
    if n == 1:
        return list(segments)
    merged: List[Segment] = []
    for i in range(len(segments) - n + 1):
        group = segments[i : i + n]
        contiguous = all(
            a.recording_id == b.recording_id and a.stop == b.start
            for a, b in zip(group, group[1:])
        )
        if not contiguous:
            continue
        first, last = group[0], group[-1]
        label = None
        if all(s.label is not None for s in group):
            label = QualityLabel(
                rom=first.label.rom,
                instability=float(np.mean([s.label.instability for s in group])),
                reps=sum(s.reps for s in group),
            )
        merged.append(
            Segment(
                segment_id=f"{first.segment_id}+{n}",
                recording_id=first.recording_id,
                subject_id=first.subject_id,
                exercise=first.exercise,
                start=first.start,
                stop=last.stop,
                signal=np.concatenate([s.signal for s in group], axis=1),
                reps=sum(s.reps for s in group),
                label=label,
            )
        )
    return merged


def label_record(segment: Segment) -> dict:
    label = _require_label(segment)
    return {
        "segment_id": segment.segment_id,
        "recording_id": segment.recording_id,
        "subject_id": segment.subject_id,
        "exercise": segment.exercise.value,
        "start": segment.start,
        "stop": segment.stop,
        "rom_degrees": label.rom.degrees,
        "instability": label.instability,
        "reps": label.reps,
    }


def write_labels(segments: Sequence[Segment], path: str | Path) -> Path:
    """Label JSON: one record per segment."""
    return write_json(path, [label_record(s) for s in segments])


def pair_record(pair: SimilarityPair) -> dict:
    return {
        "signal_id": pair.signal.segment_id,
        "anchor_id": pair.anchor.segment_id,
        "subject_id": pair.signal.subject_id,
        "metric": pair.metric.value,
        "label": pair.label,
    }


def write_pair_manifest(pairs: Iterable[SimilarityPair | dict], path: str | Path) -> Path:
    """One JSON object per line referencing segments by id."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        for p in pairs:
            record = pair_record(p) if isinstance(p, SimilarityPair) else p
            f.write(json.dumps(record, sort_keys=True) + "\n")
    return path


def read_pair_manifest(path: str | Path) -> List[dict]:
    path = Path(path)
    records = []
    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                records.append(json.loads(line))
            except json.JSONDecodeError as e:
                raise DataError(f"bad pair record: {e}", path=str(path), line=lineno) from e
    return records


def read_labels(path: str | Path) -> List[dict]:
    """Label records written by write_labels."""
    path = Path(path)
    try:
        records = json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise DataError(f"cannot read labels: {e.strerror}", path=str(path)) from e
    except json.JSONDecodeError as e:
        raise DataError(f"bad label JSON: {e.msg}", path=str(path), line=e.lineno) from e
    if not isinstance(records, list):
        raise DataError("label file must hold a JSON list", path=str(path))
    return records


def metric_feature(segment: Segment, metric: MetricKind, cfg: MetricConfig) -> float:
    """Normalised per-segment value whose absolute difference drives the pair label."""
    label = _require_label(segment)
    if metric is MetricKind.ROM:
        sim_rom(label.rom.degrees, label.rom.degrees, cfg)
        return label.rom.degrees / cfg.max_rom
    if metric is MetricKind.STABILITY:
        return label.instability
    sim_repetition(label.reps, label.reps, cfg)
    return label.reps / cfg.max_reps


def pair_matrix(group: Sequence[Segment], metric: MetricKind, cfg: MetricConfig) -> np.ndarray:
    """Label of every (signal, anchor) pair of one subject group as a matrix."""
    f = np.array([metric_feature(s, metric, cfg) for s in group], dtype=np.float64)
    return np.clip(1.0 - np.abs(f[:, None] - f[None, :]), 0.0, 1.0)
