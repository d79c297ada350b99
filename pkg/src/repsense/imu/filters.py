"""Zero-phase Butterworth filtering of signal matrices."""

import numpy as np
from scipy.signal import butter, sosfiltfilt

from repsense.errors import ParameterError
from repsense.models import FilterConfig


def _design(cutoff: float, fs: float, btype: str, order: int) -> np.ndarray:
    nyquist = 0.5 * fs
    edges = np.atleast_1d(cutoff)
    if np.any(edges <= 0) or np.any(edges >= nyquist):
        raise ParameterError(
            f"cutoff {cutoff} Hz must lie strictly between 0 and Nyquist ({nyquist:g} Hz)"
        )
    return butter(order, cutoff, btype=btype, fs=fs, output="sos")


def _pad_length(sos: np.ndarray) -> int:
    """Edge padding sosfiltfilt applies by default; inputs must be longer."""
    first_order = min((sos[:, 2] == 0).sum(), (sos[:, 5] == 0).sum())
    return 3 * (2 * len(sos) + 1 - int(first_order))


def _check_length(length: int, sos: np.ndarray, minimum: int = 1) -> None:
    needed = max(minimum, _pad_length(sos) + 1)
    if length < needed:
        raise ParameterError(
            f"signal of {length} samples is too short for the filter "
            f"(need at least {needed})"
        )


def lowpass(
    S: np.ndarray,
    cutoff: float,
    fs: float,
    config: FilterConfig | None = None,
) -> np.ndarray:
    """
    Low-pass every channel forward and backward (zero phase).

    Args:
        S: Signal matrix of shape (channels, L)
        cutoff: -3 dB frequency of a single pass, Hz
        fs: Sampling rate, Hz
        config: Filter order / minimum length

    Returns:
        Filtered matrix with the same shape as S.
    """
    config = config or FilterConfig()
    S = np.asarray(S, dtype=np.float64)
    sos = _design(cutoff, fs, "lowpass", config.order)
    _check_length(S.shape[-1], sos, config.min_length)
    return sosfiltfilt(sos, S, axis=-1)


def bandpass(
    x: np.ndarray, low: float, high: float, fs: float, order: int = 2
) -> np.ndarray:
    """Zero-phase band-pass along the last axis."""
    x = np.asarray(x, dtype=np.float64)
    sos = _design([low, high], fs, "bandpass", order)
    _check_length(x.shape[-1], sos)
    return sosfiltfilt(sos, x, axis=-1)
