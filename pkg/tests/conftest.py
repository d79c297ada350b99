"""
Pytest configuration and fixtures for the test suite.
"""

import pytest

from repsense.models import (
    Exercise,
    MetricConfig,
    ModelConfig,
    RomClass,
    SubjectProfile,
    SynthConfig,
    SynthSpec,
)


def pytest_configure(config):
    """Register custom markers."""
    config.addinivalue_line("markers", "slow: marks tests as slow running tests")


def pytest_addoption(parser):
    """Add custom command line options."""
    parser.addoption(
        "--slow",
        action="store_true",
        default=False,
        help="run slow training tests",
    )


def pytest_collection_modifyitems(config, items):
    """Automatically skip slow tests unless --slow flag is used."""
    if config.getoption("--slow"):
        # --slow given in cli: do not skip slow tests
        return

    skip_slow = pytest.mark.skip(reason="need --slow option to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def tiny_config():
    """Smallest network that still exercises every stage (n = 4 windows)."""
    return ModelConfig(
        window=6,
        step=64,
        max_length=200,
        d_model=8,
        heads=2,
        lstm_layers=1,
        dropout=0.0,
        num_classes=5,
        conv_spec=[(4, 3), (4, 3)],
        classifier_hidden=8,
    )


@pytest.fixture
def profile():
    return SubjectProfile(
        subject_id="S00", arm_length_scale=1.0, tempo=2.0, amplitude_jitter=0.05, rng_seed=11
    )


@pytest.fixture
def make_spec(profile):
    def _make(
        exercise=Exercise.SHOULDER_ABDUCTION, rom=90, tremor=0.0, reps=10, replicate=0, subject=None
    ):
        return SynthSpec(
            exercise=exercise,
            rom_degrees=rom,
            tremor_level=tremor,
            reps=reps,
            profile=subject or profile,
            replicate=replicate,
        )

    return _make


@pytest.fixture
def metric_config():
    return MetricConfig()


@pytest.fixture
def labelled_segments(make_spec, metric_config):
    """One-rep labelled segments of two subjects, every SA ROM class, clean and tremulous."""
    from repsense.metrics.pairs import label_segment
    from repsense.segmentation.cuts import split
    from repsense.synth.generator import generate

    subjects = [
        SubjectProfile(subject_id=f"S{i:02d}", tempo=1.5 + 0.5 * i, amplitude_jitter=0.05, rng_seed=100 + i)
        for i in range(2)
    ]
    segments = []
    for subject in subjects:
        for rom in (30, 60, 90, 120, 150):
            for tremor in (0.0, 1.0):
                spec = make_spec(rom=rom, tremor=tremor, reps=3, subject=subject)
                rec, cuts, _ = generate(spec, metric_config)
                rom_class = RomClass(exercise=spec.exercise, degrees=rom)
                segments += [label_segment(s, rom_class, metric_config) for s in split(rec, cuts)]
    return segments


@pytest.fixture(scope="session")
def small_corpus(tmp_path_factory):
    """Corpus of 3 subjects x 5 ROM classes x 2 tremor levels, 4 reps each, on disk."""
    from repsense.synth.generator import generate_corpus

    out = tmp_path_factory.mktemp("corpus")
    cfg = SynthConfig(n_subjects=3, per_cell=1, reps=4, tremor_levels=(0.0, 1.0))
    manifest = generate_corpus(3, 1, seed=5, out_dir=out, config=cfg)
    return out, manifest
