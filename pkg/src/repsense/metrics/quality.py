"""Instability score and similarity ground truth for the three metrics."""

import numpy as np

from repsense.errors import ParameterError
from repsense.imu.filters import lowpass
from repsense.models import SAMPLING_RATE, MetricConfig


def coefficient_of_variation(
    S: np.ndarray, cfg: MetricConfig, trend: np.ndarray | None = None
) -> float:
    """
    Mean absolute per-axis coefficient of variation.

    standard mode computes sigma / |mu|, inverted mode |mu| / sigma; every
    denominator is floored at cfg.eps_floor. sigma is the population std
    about the channel mean, or about `trend` when one is given.
    """
    S = np.asarray(S, dtype=np.float64)
    if S.shape[-1] < 2:
        raise ParameterError("coefficient of variation needs at least 2 samples")
    mu = np.abs(S.mean(axis=-1))
    if trend is None:
        sigma = S.std(axis=-1)
    else:
        sigma = np.sqrt(np.mean((S - trend) ** 2, axis=-1))
    if cfg.cv_mode == "standard":
        cv = sigma / np.maximum(mu, cfg.eps_floor)
    else:
        cv = mu / np.maximum(sigma, cfg.eps_floor)
    return float(np.mean(np.abs(cv)))


def instability(S: np.ndarray, cfg: MetricConfig, fs: float = SAMPLING_RATE) -> float:
    """
    tanh(|CV(lowpass(S, cutoff))|), a score in [0, 1).

    By default the CV's dispersion is taken around a cfg.trend_cutoff
    low-pass of the signal, so the intended motion itself does not count as
    instability, and denominators are floored at cfg.eps_floor. A clean
    repetition then scores near 0. With trend_cutoff=None and
    cv_mode="inverted" the literal mu/sigma-about-the-mean form is used,
    which scores a clean repetition near 0.75.
    """
    filtered = lowpass(S, cfg.cutoff, fs)
    trend = None
    if cfg.trend_cutoff is not None:
        trend = lowpass(filtered, cfg.trend_cutoff, fs)
    return float(np.tanh(abs(coefficient_of_variation(filtered, cfg, trend))))


def sim_rom(m_a: float, m_b: float, cfg: MetricConfig) -> float:
    """1 - |m_a/R - m_b/R|."""
    for m in (m_a, m_b):
        if not 0 <= m <= cfg.max_rom:
            raise ParameterError(f"ROM {m} outside [0, {cfg.max_rom:g}]")
    return 1.0 - abs(m_a / cfg.max_rom - m_b / cfg.max_rom)


def sim_stability_scores(i_a: float, i_b: float) -> float:
    return 1.0 - abs(i_a - i_b)


def sim_stability(S_a: np.ndarray, S_b: np.ndarray, cfg: MetricConfig) -> float:
    """1 - |instability(S_a) - instability(S_b)|."""
    return sim_stability_scores(instability(S_a, cfg), instability(S_b, cfg))


def sim_repetition(r_a: int, r_b: int, cfg: MetricConfig) -> float:
    """1 - |r_a/M - r_b/M|."""
    for r in (r_a, r_b):
        if not 1 <= r <= cfg.max_reps:
            raise ParameterError(f"repetition count {r} outside [1, {cfg.max_reps}]")
    return 1.0 - abs(r_a / cfg.max_reps - r_b / cfg.max_reps)
