"""
Tests for study grids and plot output.

Run:
    pytest tests/test_studies.py -v
"""

import pandas as pd
import pytest

from repsense.errors import ParameterError
from repsense.models import MetricKind, SegmentationConfig, TrainConfig
from repsense.segmentation import segment_recording
from repsense.synth.generator import generate
from repsense.training.studies import STUDIES, StudyRow, run_study, write_study
from repsense.utils.plotting import plot_confusion, plot_energy, write_energy_csv


def test_every_study_has_distinct_variants():
    assert set(STUDIES) == {"window", "padding", "dropout", "repetition", "ablation"}
    for variants in STUDIES.values():
        names = [v.name for v in variants]
        assert len(names) == len(set(names))
    assert [v.merge_size for v in STUDIES["repetition"]] == [1, 2, 3]


def test_unknown_study_is_rejected(labelled_segments, metric_config, tiny_config):
    with pytest.raises(ParameterError, match="unknown study"):
        run_study("depth", labelled_segments, MetricKind.ROM, metric_config, tiny_config, TrainConfig())


def test_padding_study_gives_one_row_per_variant(labelled_segments, metric_config, tiny_config):
    cfg = TrainConfig(epochs=1, batch_size=256, pair_fraction=0.1, seed=2)
    rows = run_study("padding", labelled_segments, MetricKind.ROM, metric_config, tiny_config, cfg)
    assert [r.variant for r in rows] == ["front", "back"]
    assert all(0.0 <= r.accuracy <= 1.0 for r in rows)


def test_write_study_table(tmp_path):
    rows = [
        StudyRow(study="dropout", variant="dropout0", mean_r2=0.5, pooled_r2=0.55, accuracy=0.7),
        StudyRow(study="dropout", variant="dropout0.2", mean_r2=None, pooled_r2=None, accuracy=0.6),
    ]
    table = pd.read_csv(write_study(rows, tmp_path / "s" / "dropout.csv"))
    assert table.columns.tolist() == ["study", "variant", "mean_r2", "pooled_r2", "accuracy"]
    assert table["mean_r2"].isna().tolist() == [False, True]


def test_energy_plot_and_table(tmp_path, make_spec):
    rec, _, _ = generate(make_spec(reps=3))
    series, cuts = segment_recording(rec, SegmentationConfig())
    svg = plot_energy(rec, series, cuts, tmp_path / "plots" / "e.svg")
    assert svg.read_text(encoding="utf-8").lstrip().startswith("<?xml")
    table = pd.read_csv(write_energy_csv(rec, series, cuts, tmp_path / "plots" / "e.csv"))
    assert len(table) == rec.n_samples


def test_confusion_plot(tmp_path):
    path = plot_confusion([[1, 0], [2, 3]], ["low", "high"], tmp_path / "c.svg")
    assert path.exists()
