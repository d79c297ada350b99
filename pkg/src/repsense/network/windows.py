"""Sliding-window tensorization of segments."""

from typing import NamedTuple, Sequence

import numpy as np
import torch
from numpy.lib.stride_tricks import sliding_window_view

from repsense.errors import ParameterError
from repsense.imu.scaler import apply_scaler
from repsense.models import AxisScaler, ModelConfig


class WindowTensor(NamedTuple):
    """Windows of one padded segment."""

    windows: np.ndarray  # (n, k, 6), ordered in time
    padded: np.ndarray  # (n,) True where a window holds only padding


def pad_signal(S: np.ndarray, cfg: ModelConfig) -> np.ndarray:
    length = S.shape[1]
    if length > cfg.max_length:
        raise ParameterError(
            f"segment has {length} samples but model.max_length is {cfg.max_length}; "
            "raise model.max_length in the config"
        )
    gap = cfg.max_length - length
    widths = ((0, 0), (gap, 0)) if cfg.padding == "front" else ((0, 0), (0, gap))
    return np.pad(S, widths)


def slide(segment, cfg: ModelConfig, scaler: AxisScaler | None = None) -> WindowTensor:
    """
    Scale, zero-pad to max_length and cut a segment into windows.

    Args:
        segment: A Segment or a raw (6, L) matrix
        cfg: Window length, step, max_length and padding side
        scaler: Optional per-axis standardisation applied before padding

    Returns:
        WindowTensor with cfg.n_windows windows of cfg.window samples.
    """
    S = np.asarray(getattr(segment, "signal", segment), dtype=np.float64)
    length = S.shape[1]
    if scaler is not None:
        S = apply_scaler(scaler, S)
    padded = pad_signal(S, cfg)

    n = cfg.n_windows
    view = sliding_window_view(padded, cfg.window, axis=1)[:, :: cfg.step][:, :n]
    windows = np.ascontiguousarray(view.transpose(1, 2, 0))

    starts = np.arange(n) * cfg.step
    if cfg.padding == "front":
        mask = starts + cfg.window <= cfg.max_length - length
    else:
        mask = starts >= length
    return WindowTensor(windows=windows, padded=mask)


def stack_windows(
    segments: Sequence,
    cfg: ModelConfig,
    scaler: AxisScaler | None = None,
    dtype: torch.dtype = torch.float32,
) -> torch.Tensor:
    """Batch of windowed segments as a (B, n, k, 6) tensor."""
    batch = np.stack([slide(s, cfg, scaler).windows for s in segments])
    return torch.from_numpy(batch).to(dtype)
