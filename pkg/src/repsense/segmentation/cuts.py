"""Cut proposal from energy peaks and splitting into repetitions."""

import json
import logging
from pathlib import Path
from typing import List, Tuple

import numpy as np
from pydantic import ValidationError
from scipy.signal import find_peaks

from repsense.errors import DataError, SegmentationError
from repsense.imu.io import write_json
from repsense.models import CutSet, EnergySeries, ImuRecording, Segment, SegmentationConfig
from repsense.segmentation.energy import energy

logger = logging.getLogger(__name__)


def adaptive_threshold(values: np.ndarray, factor: float) -> float:
    median = float(np.median(values))
    return median + factor * (float(values.max()) - median)


def propose_cuts(
    E: EnergySeries, cfg: SegmentationConfig, recording_id: str = ""
) -> CutSet:
    """
    Pick repetition boundaries at the merged energy peaks.

    Peaks must exceed median(E) + factor * (max(E) - median(E)). Peaks closer
    than min_gap keep the higher one (earlier index on ties). With
    expected_reps = k the k - 1 highest qualifying peaks are returned.
    """
    values = E.values
    if len(values) == 0:
        raise SegmentationError("energy series is empty")
    if float(values.max()) <= 0.0:
        return _empty_or_fail(cfg, recording_id, 0, 0.0)

    threshold = adaptive_threshold(values, cfg.threshold_factor)
    candidates, props = find_peaks(values, height=threshold)
    heights = props["peak_heights"]

    kept: List[int] = []
    for idx in sorted(range(len(candidates)), key=lambda j: (-heights[j], candidates[j])):
        pos = int(candidates[idx])
        if all(abs(pos - other) >= cfg.min_gap for other in kept):
            kept.append(pos)

    if cfg.expected_reps is not None:
        wanted = cfg.expected_reps - 1
        if len(kept) < wanted:
            raise SegmentationError(
                f"found {len(kept)} qualifying peaks above threshold {threshold:.4g} "
                f"but expected_reps={cfg.expected_reps} needs {wanted}"
            )
        # kept is already ordered by height
        kept = kept[:wanted]

    cuts = sorted(kept)
    logger.debug("✂️ %s: %d cuts (threshold %.4g)", recording_id or "recording", len(cuts), threshold)
    return CutSet(recording_id=recording_id, cuts=cuts, provenance=["auto"] * len(cuts))


def _empty_or_fail(
    cfg: SegmentationConfig, recording_id: str, found: int, threshold: float
) -> CutSet:
    if cfg.expected_reps is not None and cfg.expected_reps > 1:
        raise SegmentationError(
            f"found {found} qualifying peaks above threshold {threshold:.4g} "
            f"but expected_reps={cfg.expected_reps} needs {cfg.expected_reps - 1}"
        )
    return CutSet(recording_id=recording_id)


def split(rec: ImuRecording, cuts: CutSet) -> List[Segment]:
    """Slice a recording at the cut positions into contiguous segments."""
    try:
        cuts.validate_for(rec.n_samples)
    except ValueError as e:
        raise DataError(f"cuts do not fit {rec.recording_id}: {e}") from e
    bounds = [0, *cuts.cuts, rec.n_samples]
    return [
        Segment(
            segment_id=f"{rec.recording_id}-s{i:02d}",
            recording_id=rec.recording_id,
            subject_id=rec.subject_id,
            exercise=rec.exercise,
            start=start,
            stop=stop,
            signal=rec.signal[:, start:stop],
        )
        for i, (start, stop) in enumerate(zip(bounds, bounds[1:]))
    ]


def write_cutset(cuts: CutSet, path: str | Path) -> Path:
    return write_json(path, cuts.model_dump())


def read_cutset(path: str | Path) -> CutSet:
    """Load a (possibly hand-edited) CutSet JSON."""
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
        if "provenance" not in data:
            data["provenance"] = ["manual"] * len(data.get("cuts", []))
        return CutSet.model_validate(data)
    except (OSError, json.JSONDecodeError, ValidationError) as e:
        raise DataError(f"invalid CutSet: {e}", path=str(path)) from e


def segment_recording(rec: ImuRecording, cfg: SegmentationConfig) -> Tuple[EnergySeries, CutSet]:
    """Energy curve and proposed cuts of one recording."""
    series = energy(rec.signal, cfg)
    cuts = propose_cuts(series, cfg, recording_id=rec.recording_id)
    logger.info("✂️ %s: %d cuts", rec.recording_id, len(cuts.cuts))
    return series, cuts
