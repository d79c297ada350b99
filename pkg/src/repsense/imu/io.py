"""CSV/JSON ingestion and export of recordings."""

import json
from pathlib import Path
from typing import Any, Dict

import numpy as np
import pandas as pd
from pydantic import ValidationError

from repsense.errors import DataError
from repsense.models import CHANNELS, SAMPLING_RATE, Exercise, ImuRecording

CSV_COLUMNS = ("t", *CHANNELS)
STANDARD_GRAVITY = 9.80665
FLOAT_FORMAT = "%.10g"


def sidecar_path_for(csv_path: str | Path) -> Path:
    return Path(csv_path).with_suffix(".json")


def read_sidecar(path: str | Path) -> Dict[str, Any]:
    path = Path(path)
    try:
        meta = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise DataError(f"cannot read sidecar: {e}", path=str(path)) from e
    missing = {"subject_id", "exercise"} - set(meta)
    if missing:
        raise DataError(f"sidecar is missing {sorted(missing)}", path=str(path))
    return meta


def read_recording(
    csv_path: str | Path,
    sidecar_path: str | Path | None = None,
    recording_id: str | None = None,
) -> ImuRecording:
    """
    Load a recording from its CSV and JSON sidecar.

    Args:
        csv_path: CSV with header t,ax,ay,az,gx,gy,gz
        sidecar_path: JSON with subject_id, exercise, fs and optional unit;
            defaults to the CSV path with a .json suffix
        recording_id: Defaults to the CSV file stem

    Returns:
        Validated ImuRecording with accelerometer in m/s^2.
    """
    csv_path = Path(csv_path)
    sidecar_path = Path(sidecar_path) if sidecar_path else sidecar_path_for(csv_path)
    meta = read_sidecar(sidecar_path)

    try:
        frame = pd.read_csv(csv_path, dtype=str, keep_default_na=False)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise DataError(f"cannot parse CSV: {e}", path=str(csv_path)) from e

    if tuple(frame.columns) != CSV_COLUMNS:
        raise DataError(
            f"expected header {','.join(CSV_COLUMNS)}, got {','.join(frame.columns)}",
            path=str(csv_path),
            line=1,
        )

    numeric = frame.apply(pd.to_numeric, errors="coerce")
    bad = numeric.isna().any(axis=1) | ~np.isfinite(numeric.to_numpy()).all(axis=1)
    if bad.any():
        row = int(np.flatnonzero(bad.to_numpy())[0])
        # header is line 1
        raise DataError("non-numeric or non-finite value", path=str(csv_path), line=row + 2)

    values = numeric.to_numpy(dtype=np.float64)
    signal = values[:, 1:].T.copy()
    unit = meta.get("unit", "m/s^2")
    if unit == "g":
        signal[:3] *= STANDARD_GRAVITY
    elif unit not in ("m/s^2", "m/s2"):
        raise DataError(f"unknown accelerometer unit {unit!r}", path=str(sidecar_path))

    try:
        return ImuRecording(
            recording_id=recording_id or csv_path.stem,
            subject_id=str(meta["subject_id"]),
            exercise=Exercise(meta["exercise"]),
            fs=float(meta.get("fs", SAMPLING_RATE)),
            t=values[:, 0],
            signal=signal,
        )
    except (ValidationError, ValueError) as e:
        raise DataError(f"invalid recording: {e}", path=str(csv_path)) from e


def write_recording(rec: ImuRecording, csv_path: str | Path) -> Path:
    """Write a recording CSV plus its sidecar; returns the sidecar path."""
    csv_path = Path(csv_path)
    csv_path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame(rec.signal.T, columns=list(CHANNELS))
    frame.insert(0, "t", rec.t)
    frame.to_csv(csv_path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")

    sidecar = sidecar_path_for(csv_path)
    meta = {"subject_id": rec.subject_id, "exercise": rec.exercise.value, "fs": rec.fs}
    write_json(sidecar, meta)
    return sidecar


def write_json(path: str | Path, payload: Any) -> Path:
    """Write JSON with stable key order so identical inputs give identical bytes."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path
