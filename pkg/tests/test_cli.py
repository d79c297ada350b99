"""
Tests for the `repsense` command line.

Every test calls main() in-process with an isolated output directory.

Run:
    pytest tests/test_cli.py -v
"""

import json

import numpy as np
import pytest
import torch

from repsense.cli import build_parser, config_overrides, main
from repsense.imu import write_recording
from repsense.models import Exercise, ImuRecording
from repsense.network import SiameseNet, save_checkpoint
from repsense.segmentation import split
from repsense.synth.generator import generate


def _write_zero_recording(path, n=400):
    rec = ImuRecording(
        recording_id=path.stem,
        subject_id="S09",
        exercise=Exercise.FORWARD_FLEXION,
        t=np.arange(n) / 50.0,
        signal=np.zeros((6, n)),
    )
    write_recording(rec, path)
    return path


def _write_one_rep(path, make_spec):
    rec, cuts, _ = generate(make_spec(reps=2))
    first = split(rec, cuts)[0]
    one = ImuRecording(
        recording_id=path.stem,
        subject_id=rec.subject_id,
        exercise=rec.exercise,
        t=rec.t[: first.stop],
        signal=first.signal,
    )
    write_recording(one, path)
    return path


def test_synth_writes_corpus(tmp_path, capsys):
    code = main([
        "synth", "--subjects", "2", "--per-cell", "1", "--reps", "3",
        "--tremor-levels", "0", "--seed", "4", "--out-dir", str(tmp_path),
    ])
    assert code == 0
    manifest = json.loads((tmp_path / "corpus" / "manifest.json").read_text(encoding="utf-8"))
    assert manifest["seed"] == 4
    assert len(manifest["recordings"]) == 10
    assert "Generated 10 recordings" in capsys.readouterr().out


def test_synth_rejects_zero_subjects(tmp_path, capsys):
    code = main(["synth", "--subjects", "0", "--out-dir", str(tmp_path)])
    assert code == 2
    assert "Invalid configuration" in capsys.readouterr().err


def test_unknown_flag_is_usage_error():
    with pytest.raises(SystemExit) as excinfo:
        main(["synth", "--bogus"])
    assert excinfo.value.code == 2


def test_segment_zero_signal_gives_empty_cutset(tmp_path):
    csv = _write_zero_recording(tmp_path / "still.csv")
    code = main(["segment", str(csv), "--out-dir", str(tmp_path / "out")])
    assert code == 0
    cuts = json.loads((tmp_path / "out" / "cuts" / "still.json").read_text(encoding="utf-8"))
    assert cuts == {"recording_id": "still", "cuts": [], "provenance": []}


def test_segment_impossible_rep_count_is_data_error(tmp_path, capsys):
    csv = _write_zero_recording(tmp_path / "still.csv")
    code = main(["segment", str(csv), "--expected-reps", "5", "--out-dir", str(tmp_path / "out")])
    assert code == 3
    assert "expected_reps=5" in capsys.readouterr().err


def test_segment_missing_file_is_data_error(tmp_path):
    assert main(["segment", str(tmp_path / "absent.csv"), "--out-dir", str(tmp_path)]) == 3


def test_label_without_rom_is_usage_error(tmp_path):
    csv = _write_zero_recording(tmp_path / "still.csv")
    out = tmp_path / "out"
    assert main(["segment", str(csv), "--out-dir", str(out)]) == 0
    assert main(["label", str(csv), "--out-dir", str(out)]) == 2
    assert main(["label", str(csv), "--rom", "90", "--out-dir", str(out)]) == 0
    labels = json.loads((out / "labels.json").read_text(encoding="utf-8"))
    assert labels[0]["rom_degrees"] == 90
    assert labels[0]["start"] == 0 and labels[0]["stop"] == 400


def test_score_self_similarity(tmp_path, tiny_config, make_spec, capsys):
    torch.manual_seed(0)
    ckpt = save_checkpoint(SiameseNet(tiny_config), tmp_path / "m.ckpt", metadata={"classes": ["a", "b", "c", "d", "e"]})
    csv = _write_one_rep(tmp_path / "rep.csv", make_spec)
    code = main(["score", str(csv), str(csv), str(ckpt), "--classify", "--out-dir", str(tmp_path)])
    assert code == 0
    out = capsys.readouterr().out
    value = float(out.split("similarity:")[1].split()[0])
    assert value == pytest.approx(1.0, abs=1e-5)
    assert "class: " in out


def test_score_rejects_too_long_recording(tmp_path, tiny_config, make_spec):
    ckpt = save_checkpoint(SiameseNet(tiny_config), tmp_path / "m.ckpt")
    csv = _write_zero_recording(tmp_path / "long.csv", n=400)
    assert main(["score", str(csv), str(csv), str(ckpt)]) == 2


def test_plot_writes_svg_and_csv(tmp_path, make_spec):
    rec, _, _ = generate(make_spec(reps=4))
    csv = tmp_path / "rec.csv"
    write_recording(rec, csv)
    assert main(["plot", str(csv), "--out-dir", str(tmp_path / "out")]) == 0
    svg = tmp_path / "out" / "plots" / "rec.svg"
    assert svg.exists()
    table = (tmp_path / "out" / "plots" / "rec.csv").read_text(encoding="utf-8").splitlines()
    assert len(table) == rec.n_samples + 1


def test_graph_writes_mermaid(tmp_path):
    target = tmp_path / "pipeline.mmd"
    assert main(["graph", "--output", str(target)]) == 0
    text = target.read_text(encoding="utf-8")
    for step in ("synth", "segment", "label", "pairs", "train", "evaluate"):
        assert step in text


def test_config_file_is_validated(tmp_path):
    cfg = tmp_path / "bad.toml"
    cfg.write_text("[synth]\nn_subjects = 1\n", encoding="utf-8")
    assert main(["synth", "--config", str(cfg), "--out-dir", str(tmp_path)]) == 2
    assert main(["synth", "--config", str(tmp_path / "x.yaml"), "--out-dir", str(tmp_path)]) == 2


def test_flags_override_config_paths():
    args = build_parser().parse_args(["train", "--seed", "3", "--metric", "Stability", "--epochs", "5"])
    overrides = config_overrides(args)
    assert overrides["seed"] == 3
    assert overrides["train"] == {"seed": 3, "metric": "Stability", "epochs": 5}
