"""Axis-wise standardisation fitted on the training split."""

from typing import Sequence

import numpy as np

from repsense.errors import ParameterError
from repsense.models import STD_FLOOR, AxisScaler


def fit_scaler(signals: Sequence, fit_source: str = "train") -> AxisScaler:
    """
    Fit per-axis mean and population std over the concatenation of inputs.

    Args:
        signals: Recordings, segments or raw (6, L) matrices
        fit_source: Tag naming the split the statistics come from
    """
    mats = [np.asarray(getattr(s, "signal", s), dtype=np.float64) for s in signals]
    if not mats:
        raise ParameterError("cannot fit a scaler on an empty input")
    data = np.concatenate(mats, axis=1)
    if data.shape[1] < 2:
        raise ParameterError("need at least 2 samples per axis to fit a scaler")
    mean = data.mean(axis=1)
    std = np.maximum(data.std(axis=1), STD_FLOOR)
    return AxisScaler(
        mean=tuple(float(v) for v in mean),
        std=tuple(float(v) for v in std),
        fit_source=fit_source,
    )


def _stats(scaler: AxisScaler):
    return (
        np.asarray(scaler.mean, dtype=np.float64)[:, None],
        np.asarray(scaler.std, dtype=np.float64)[:, None],
    )


def apply_scaler(scaler: AxisScaler, S: np.ndarray) -> np.ndarray:
    mean, std = _stats(scaler)
    return (np.asarray(S, dtype=np.float64) - mean) / std


def invert_scaler(scaler: AxisScaler, S: np.ndarray) -> np.ndarray:
    mean, std = _stats(scaler)
    return np.asarray(S, dtype=np.float64) * std + mean
