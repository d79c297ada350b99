"""
Tests for the instability score, the three similarity labels and pair building.

Run:
    pytest tests/test_quality_metrics.py -v
"""

import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.stats import spearmanr

from repsense.errors import DataError, ParameterError
from repsense.metrics import (
    build_pairs,
    coefficient_of_variation,
    group_by_subject,
    instability,
    label_segment,
    merge_repetitions,
    pair_label,
    pair_matrix,
    read_labels,
    read_pair_manifest,
    sim_repetition,
    sim_rom,
    sim_stability,
    write_labels,
    write_pair_manifest,
)
from repsense.models import (
    HAS_DEGREES,
    Exercise,
    MetricConfig,
    MetricKind,
    RomClass,
    SubjectProfile,
    SynthSpec,
)
from repsense.segmentation import split
from repsense.synth.generator import generate

TREMOR_LEVELS = (0.0, 0.25, 0.5, 0.75, 1.0)

cfg = MetricConfig()
roms = st.floats(0.0, cfg.max_rom, allow_nan=False)
rep_counts = st.integers(1, cfg.max_reps)


# ---------------------------------------------------------------- similarity functions


@given(roms, roms)
def test_sim_rom_is_symmetric_and_bounded(a, b):
    value = sim_rom(a, b, cfg)
    assert value == sim_rom(b, a, cfg)
    assert 0.0 <= value <= 1.0


@given(roms)
def test_sim_rom_of_equal_values_is_one(a):
    assert sim_rom(a, a, cfg) == 1.0


@pytest.mark.parametrize("a", HAS_DEGREES)
@pytest.mark.parametrize("b", HAS_DEGREES)
def test_sim_rom_over_every_class_pair(a, b):
    """Exhaustive over the ROM anchors: 1 - |a - b| / 150."""
    assert sim_rom(a, b, cfg) == pytest.approx(1.0 - abs(a - b) / 150.0, abs=1e-12)


def test_sim_rom_hand_values():
    assert sim_rom(30, 150, cfg) == pytest.approx(0.2)
    assert sim_rom(90, 60, cfg) == pytest.approx(0.8)


@pytest.mark.parametrize("bad", [-1.0, 151.0])
def test_sim_rom_rejects_out_of_range(bad):
    with pytest.raises(ParameterError):
        sim_rom(bad, 90, cfg)


@given(rep_counts, rep_counts)
def test_sim_repetition_properties(a, b):
    value = sim_repetition(a, b, cfg)
    assert value == sim_repetition(b, a, cfg)
    assert 0.0 <= value <= 1.0
    assert (value == 1.0) == (a == b)


def test_sim_repetition_hand_values():
    assert sim_repetition(1, 3, cfg) == pytest.approx(1.0 / 3.0)
    assert sim_repetition(2, 3, cfg) == pytest.approx(2.0 / 3.0)


@pytest.mark.parametrize("bad", [0, 4])
def test_sim_repetition_rejects_out_of_range(bad):
    with pytest.raises(ParameterError):
        sim_repetition(bad, 1, cfg)


# ---------------------------------------------------------------- instability


def test_coefficient_of_variation_hand_examples():
    S = np.array([[9.0, 11.0]])
    assert coefficient_of_variation(S, cfg) == pytest.approx(0.1)
    inverted = MetricConfig(cv_mode="inverted")
    assert coefficient_of_variation(S, inverted) == pytest.approx(10.0)


def test_cv_mode_alias():
    assert MetricConfig(cv_mode="paper").cv_mode == "inverted"
    with pytest.raises(ValueError):
        MetricConfig(cv_mode="median")


def test_coefficient_of_variation_floors_small_mean():
    """A zero-mean channel divides by the floor instead of by zero."""
    S = np.array([[-0.5, 0.5]])
    assert coefficient_of_variation(S, cfg) == pytest.approx(0.5 / cfg.eps_floor)
    assert coefficient_of_variation(S, MetricConfig(eps_floor=1.0)) == pytest.approx(0.5)


def test_coefficient_of_variation_needs_two_samples():
    with pytest.raises(ParameterError):
        coefficient_of_variation(np.ones((6, 1)), cfg)


def test_clean_motion_is_stable(make_spec):
    rec, _, label = generate(make_spec(tremor=0.0))
    assert label.instability < 0.1
    assert instability(rec.signal, cfg) == pytest.approx(label.instability)


def test_instability_in_unit_interval(make_spec):
    for tremor in (0.0, 1.0):
        rec, _, _ = generate(make_spec(tremor=tremor))
        assert 0.0 <= instability(rec.signal, cfg) < 1.0


def test_instability_ranks_tremor_levels():
    """Spearman correlation between tremor level and instability, per subject."""
    for i in range(10):
        subject = SubjectProfile(subject_id=f"S{i:02d}", tempo=1.5 + 0.25 * i, rng_seed=40 + i)
        scores = []
        for tremor in TREMOR_LEVELS:
            spec = SynthSpec(
                exercise=list(Exercise)[i % 3],
                rom_degrees=90,
                tremor_level=tremor,
                reps=5,
                profile=subject,
            )
            scores.append(generate(spec, cfg)[2].instability)
        rho = spearmanr(TREMOR_LEVELS, scores).statistic
        assert rho == pytest.approx(1.0), f"{subject.subject_id}: {scores}"


def test_corpus_tremor_levels_span_all_stability_classes():
    """Default corpus levels 0, 0.5 and 1 land in stable, in-between and unstable."""
    segment_classes = set()
    for i, exercise in enumerate(Exercise):
        subject = SubjectProfile(subject_id=f"S{i:02d}", tempo=2.0 + 0.5 * i, rng_seed=70 + i)
        for expected, tremor in enumerate((0.0, 0.5, 1.0)):
            spec = SynthSpec(
                exercise=exercise, rom_degrees=90, tremor_level=tremor, reps=4, profile=subject
            )
            rec, cuts, label = generate(spec, cfg)
            assert label.stability_class == expected, f"{exercise} tremor {tremor}: {label.instability:.3f}"
            for seg in split(rec, cuts):
                segment_classes.add(label_segment(seg, label.rom, cfg).label.stability_class)
    assert segment_classes == {0, 1, 2}


def test_sim_stability_of_signal_with_itself(make_spec):
    rec, _, _ = generate(make_spec(tremor=0.5))
    assert sim_stability(rec.signal, rec.signal, cfg) == 1.0


def test_sim_stability_separates_clean_from_tremor(make_spec):
    clean, _, _ = generate(make_spec(tremor=0.0))
    shaky, _, _ = generate(make_spec(tremor=1.0))
    assert sim_stability(clean.signal, shaky.signal, cfg) < 1.0


# ---------------------------------------------------------------- labels and pairs


def test_label_segment_requires_rom(make_spec):
    rec, cuts, _ = generate(make_spec(reps=2))
    with pytest.raises(ParameterError, match="no ROM label"):
        label_segment(split(rec, cuts)[0], None, cfg)


def test_pair_label_needs_labels(make_spec):
    rec, cuts, _ = generate(make_spec(reps=2))
    a, b = split(rec, cuts)
    with pytest.raises(ParameterError, match="has no label"):
        pair_label(a, b, MetricKind.ROM, cfg)


@pytest.mark.parametrize("metric", list(MetricKind))
def test_pair_matrix_matches_pair_label(labelled_segments, metric):
    group = next(iter(group_by_subject(labelled_segments).values()))
    matrix = pair_matrix(group, metric, cfg)
    assert matrix.shape == (len(group), len(group))
    for i in range(0, len(group), 7):
        for j in range(0, len(group), 5):
            assert matrix[i, j] == pytest.approx(pair_label(group[i], group[j], metric, cfg), abs=1e-12)
    np.testing.assert_allclose(np.diag(matrix), 1.0)


def test_build_pairs_stays_within_subject(labelled_segments):
    subset = [s for s in labelled_segments if s.label.rom.degrees in (30, 150)]
    pairs = build_pairs(subset, MetricKind.ROM, cfg)
    sizes = [len(g) for g in group_by_subject(subset).values()]
    assert len(pairs) == sum(n * n for n in sizes)
    assert all(p.signal.subject_id == p.anchor.subject_id for p in pairs)
    assert sorted({round(p.label, 12) for p in pairs}) == [0.2, 1.0]


def test_merge_repetitions_slides_over_contiguous_runs(labelled_segments):
    one_recording = [s for s in labelled_segments if s.recording_id == labelled_segments[0].recording_id]
    assert len(one_recording) == 3

    merged = merge_repetitions(one_recording, 2)
    assert len(merged) == 2
    first = merged[0]
    assert first.reps == 2 and first.label.reps == 2
    assert first.start == one_recording[0].start and first.stop == one_recording[1].stop
    assert first.label.instability == pytest.approx(
        np.mean([s.label.instability for s in one_recording[:2]])
    )
    assert first.label.rom == one_recording[0].label.rom


def test_merge_repetitions_skips_runs_across_recordings(labelled_segments):
    first_two_recordings = labelled_segments[:6]
    merged = merge_repetitions(first_two_recordings, 3)
    assert [m.recording_id for m in merged] == [
        first_two_recordings[0].recording_id,
        first_two_recordings[3].recording_id,
    ]
    assert merge_repetitions(first_two_recordings, 1) == first_two_recordings


def test_merge_repetitions_rejects_zero():
    with pytest.raises(ParameterError):
        merge_repetitions([], 0)


def test_label_file_round_trip(tmp_path, labelled_segments):
    path = write_labels(labelled_segments[:4], tmp_path / "labels.json")
    records = read_labels(path)
    assert [r["segment_id"] for r in records] == [s.segment_id for s in labelled_segments[:4]]
    assert records[0]["rom_degrees"] == labelled_segments[0].label.rom.degrees
    assert RomClass(exercise=Exercise(records[0]["exercise"]), degrees=records[0]["rom_degrees"])


def test_read_labels_rejects_non_list(tmp_path):
    path = tmp_path / "labels.json"
    path.write_text(json.dumps({"segment_id": "x"}), encoding="utf-8")
    with pytest.raises(DataError, match="JSON list"):
        read_labels(path)


def test_pair_manifest_reports_bad_line(tmp_path, labelled_segments):
    pairs = build_pairs(labelled_segments[:2], MetricKind.STABILITY, cfg)
    path = write_pair_manifest(pairs, tmp_path / "pairs.jsonl")
    records = read_pair_manifest(path)
    assert len(records) == 4
    assert records[0]["metric"] == "Stability"

    with open(path, "a", encoding="utf-8") as f:
        f.write("{broken\n")
    with pytest.raises(DataError) as excinfo:
        read_pair_manifest(path)
    assert excinfo.value.line == 5
