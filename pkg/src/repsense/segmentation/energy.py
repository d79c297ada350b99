"""Energy function over the weighted accelerometer magnitude."""

import math

import numpy as np

from repsense.errors import ParameterError
from repsense.models import EnergySeries, SegmentationConfig


def _h(S: np.ndarray, cfg: SegmentationConfig) -> np.ndarray:
    # gyro rows 3..5 never enter the energy
    w = np.asarray(cfg.weights, dtype=np.float64)[:, None]
    return np.abs(np.asarray(S, dtype=np.float64)[:3] * w).sum(axis=0)


def pointwise_energy(S: np.ndarray, cfg: SegmentationConfig, i: int) -> float:
    """h(i) = |Ax(i) Wx| + |Ay(i) Wy| + |Az(i) Wz|."""
    if not 0 <= i < S.shape[1]:
        raise ParameterError(f"index {i} outside [0, {S.shape[1]})")
    col = np.asarray(S, dtype=np.float64)[:3, i]
    return float(np.abs(col * np.asarray(cfg.weights)).sum())


def half_window(cfg: SegmentationConfig, n: int) -> int:
    """T = round(fs * lambda * N / 2000), rounding halves up."""
    return int(math.floor(cfg.fs * cfg.smoothing * n / 2000.0 + 0.5))


def energy(
    S: np.ndarray,
    cfg: SegmentationConfig,
    n: int | None = None,
    half_window_override: int | None = None,
) -> EnergySeries:
    """
    E(i) = (h(i) + sum_{n=-T..T} sqrt(h(i+n))) / (fs + 1), zero-extended.

    Args:
        S: Signal matrix (6, N)
        cfg: Weights and smoothing factor
        n: Recording length used for T; defaults to S.shape[1]
        half_window_override: Use this T instead of the lambda formula
    """
    S = np.asarray(S, dtype=np.float64)
    length = S.shape[1]
    n = length if n is None else n
    T = half_window(cfg, n) if half_window_override is None else half_window_override
    if T >= length:
        raise ParameterError(
            f"half window T={T} is not shorter than the recording ({length} samples); "
            "lower the smoothing factor"
        )
    h = _h(S, cfg)
    # full convolution is the zero-extended sum; keep the centred part
    window_sum = np.convolve(np.sqrt(h), np.ones(2 * T + 1), mode="full")[T : T + length]
    values = (h + window_sum) / (cfg.fs + 1.0)
    return EnergySeries(values=values, half_window=T)
