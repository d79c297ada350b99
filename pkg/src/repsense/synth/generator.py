"""
Parametric synthetic IMU exercise generator.

The physics is deliberately minimal: the limb angle follows a raised-cosine
profile per repetition, one accelerometer axis carries the gravity projection
along the limb, one carries the tangential acceleration, the third a constant
mounting-tilt share of gravity, and the gyro carries the angular rate on the
exercise's rotation axis. Tremor is band-limited noise added to all channels.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Sequence, Tuple

import numpy as np

from repsense.imu.filters import bandpass
from repsense.imu.io import write_json, write_recording
from repsense.metrics.quality import instability
from repsense.models import (
    SAMPLING_RATE,
    CorpusEntry,
    CorpusManifest,
    CutSet,
    Exercise,
    ImuRecording,
    MetricConfig,
    QualityLabel,
    RomClass,
    SubjectProfile,
    SynthConfig,
    SynthSpec,
    legal_degrees,
)

logger = logging.getLogger(__name__)

GRAVITY = 9.80665
TREMOR_BAND = (8.0, 12.0)
TREMOR_ACCEL = 0.5  # m/s^2 at tremor_level 1
TREMOR_GYRO = 0.3  # rad/s at tremor_level 1


@dataclass(frozen=True)
class Kinematics:
    """Sensor axis assignment of one exercise."""

    along: int
    tangential: int
    constant: int
    gyro: int
    gravity_gain: float
    constant_gravity: float
    radius: float


KINEMATICS: Dict[Exercise, Kinematics] = {
    Exercise.SHOULDER_ABDUCTION: Kinematics(
        along=0, tangential=1, constant=2, gyro=5,
        gravity_gain=1.0, constant_gravity=np.sin(0.2), radius=0.65,
    ),
    Exercise.FORWARD_FLEXION: Kinematics(
        along=1, tangential=0, constant=2, gyro=3,
        gravity_gain=1.0, constant_gravity=np.sin(0.25), radius=0.65,
    ),
    # forearm rotates about the vertical: most of gravity sits on a fixed axis
    Exercise.EXTERNAL_ROTATION: Kinematics(
        along=0, tangential=1, constant=2, gyro=4,
        gravity_gain=0.3, constant_gravity=np.sqrt(1 - 0.3**2), radius=0.3,
    ),
}

EXERCISE_CODES = {ex: i for i, ex in enumerate(Exercise)}


def repetition_period(profile: SubjectProfile, fs: float = SAMPLING_RATE) -> int:
    """Samples per repetition at the subject's tempo."""
    return int(round(profile.tempo * fs))


def limb_angle(spec: SynthSpec, fs: float = SAMPLING_RATE) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """theta, theta_dot, theta_ddot over all repetitions, in radians."""
    profile = spec.profile
    period = repetition_period(profile, fs)
    rng = np.random.default_rng(
        [profile.rng_seed, spec.replicate, EXERCISE_CODES[spec.exercise]]
    )
    jitter = rng.uniform(-1.0, 1.0, size=spec.reps) * profile.amplitude_jitter

    omega = 2.0 * np.pi * fs / period
    t_local = np.arange(period) / fs
    theta, rate, accel = [], [], []
    for k in range(spec.reps):
        half = np.deg2rad(spec.rom_degrees) * (1.0 + jitter[k]) / 2.0
        theta.append(half * (1.0 - np.cos(omega * t_local)))
        rate.append(half * omega * np.sin(omega * t_local))
        accel.append(half * omega**2 * np.cos(omega * t_local))
    return np.concatenate(theta), np.concatenate(rate), np.concatenate(accel)


def tremor_noise(spec: SynthSpec, n: int, fs: float = SAMPLING_RATE) -> np.ndarray:
    """
    Unit-std 8-12 Hz noise on 6 channels.

    The realisation depends on the subject seed and replicate only, so the
    same noise is rescaled across tremor levels.
    """
    rng = np.random.default_rng(
        [spec.profile.rng_seed, spec.replicate, EXERCISE_CODES[spec.exercise], 1]
    )
    pad = int(fs)
    white = rng.standard_normal((6, n + 2 * pad))
    band = bandpass(white, *TREMOR_BAND, fs=fs)[:, pad : pad + n]
    return band / band.std(axis=1, keepdims=True)


def generate(
    spec: SynthSpec, metric_cfg: MetricConfig | None = None
) -> Tuple[ImuRecording, CutSet, QualityLabel]:
    """
    Synthesize one labelled recording.

    Returns:
        The recording, its true repetition boundaries and its quality label
        (nominal ROM, measured instability, repetition count).
    """
    fs = SAMPLING_RATE
    kin = KINEMATICS[spec.exercise]
    theta, rate, theta_ddot = limb_angle(spec, fs)
    n = theta.shape[0]
    scale = spec.profile.arm_length_scale

    signal = np.zeros((6, n))
    signal[kin.along] = GRAVITY * kin.gravity_gain * np.cos(theta)
    signal[kin.tangential] = theta_ddot * kin.radius * scale
    signal[kin.constant] = GRAVITY * kin.constant_gravity
    signal[kin.gyro] = rate

    if spec.tremor_level > 0:
        amplitude = np.array([TREMOR_ACCEL] * 3 + [TREMOR_GYRO] * 3)[:, None]
        signal = signal + spec.tremor_level * amplitude * tremor_noise(spec, n, fs)

    rec = ImuRecording(
        recording_id=spec.recording_id,
        subject_id=spec.profile.subject_id,
        exercise=spec.exercise,
        fs=fs,
        t=np.arange(n) / fs,
        signal=signal,
    )
    period = repetition_period(spec.profile, fs)
    bounds = [k * period for k in range(1, spec.reps)]
    cuts = CutSet(recording_id=rec.recording_id, cuts=bounds, provenance=["manual"] * len(bounds))
    label = QualityLabel(
        rom=RomClass(exercise=spec.exercise, degrees=spec.rom_degrees),
        instability=instability(signal, metric_cfg or MetricConfig(), fs),
        reps=spec.reps,
    )
    return rec, cuts, label


def sample_profiles(n_subjects: int, seed: int) -> List[SubjectProfile]:
    rng = np.random.default_rng(seed)
    return [
        SubjectProfile(
            subject_id=f"S{i:02d}",
            arm_length_scale=float(rng.uniform(0.8, 1.2)),
            tempo=float(rng.uniform(1.5, 4.0)),
            amplitude_jitter=float(rng.uniform(0.0, 0.1)),
            rng_seed=int(rng.integers(0, 2**31 - 1)),
        )
        for i in range(n_subjects)
    ]


def corpus_specs(config: SynthConfig, seed: int) -> List[SynthSpec]:
    specs = []
    for profile in sample_profiles(config.n_subjects, seed):
        for exercise in config.exercises:
            for rom in legal_degrees(exercise):
                for tremor in config.tremor_levels:
                    for replicate in range(config.per_cell):
                        specs.append(
                            SynthSpec(
                                exercise=exercise,
                                rom_degrees=rom,
                                tremor_level=tremor,
                                reps=config.reps,
                                profile=profile,
                                replicate=replicate,
                            )
                        )
    return specs


def generate_corpus(
    n_subjects: int,
    per_cell: int,
    seed: int,
    out_dir: str | Path | None = None,
    config: SynthConfig | None = None,
    metric_cfg: MetricConfig | None = None,
) -> CorpusManifest:
    """
    Generate every (subject, exercise, ROM, tremor) cell per_cell times.

    Args:
        n_subjects: Number of synthetic subjects (at least 2)
        per_cell: Recordings per cell
        seed: Corpus seed; equal seeds give byte-identical output
        out_dir: When given, recordings and manifest.json are written here
        config: Exercises, tremor levels and repetitions per recording

    Returns:
        The corpus manifest.
    """
    config = (config or SynthConfig()).model_copy(
        update={"n_subjects": n_subjects, "per_cell": per_cell}
    )
    SynthConfig.model_validate(config.model_dump())

    specs = corpus_specs(config, seed)
    print(f"🧪 Generating {len(specs)} recordings for {n_subjects} subjects...")
    entries = []
    for spec in specs:
        rec, cuts, label = generate(spec, metric_cfg)
        csv_rel = f"recordings/{rec.recording_id}.csv"
        if out_dir is not None:
            write_recording(rec, Path(out_dir) / csv_rel)
        entries.append(
            CorpusEntry(
                recording_id=rec.recording_id,
                subject_id=rec.subject_id,
                exercise=rec.exercise,
                rom_degrees=spec.rom_degrees,
                tremor_level=spec.tremor_level,
                reps=spec.reps,
                csv=csv_rel,
                sidecar=f"recordings/{rec.recording_id}.json",
                true_cuts=cuts.cuts,
                instability=label.instability,
            )
        )

    manifest = CorpusManifest(seed=seed, recordings=entries)
    if out_dir is not None:
        write_manifest(manifest, Path(out_dir) / "manifest.json")
    logger.info("✅ Generated %d recordings", len(entries))
    return manifest


def write_manifest(manifest: CorpusManifest, path: str | Path) -> Path:
    return write_json(path, manifest.model_dump(mode="json"))


def regenerate(entries: Sequence[CorpusEntry], seed: int, config: SynthConfig) -> List[ImuRecording]:
    """Rebuild in-memory recordings for manifest entries without touching disk."""
    wanted = {e.recording_id for e in entries}
    specs = [s for s in corpus_specs(config, seed) if s.recording_id in wanted]
    return [generate(s)[0] for s in specs]
