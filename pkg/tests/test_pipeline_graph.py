"""
Tests for the end-to-end pipeline graph and checkpointed resume.

The data steps run for real on a tiny corpus; training and evaluation are
mocked except in the --slow run.

Run:
    pytest tests/test_pipeline_graph.py -v
    pytest tests/test_pipeline_graph.py -v --slow
"""

import json
from pathlib import Path

import pytest

from repsense.config import AppConfig
from repsense.graphs.pipeline import STEPS, build_pipeline_graph, run_pipeline
from repsense.models import ModelConfig, SynthConfig, TrainConfig
from repsense.nodes import synth_node


@pytest.fixture
def pipeline_config(tmp_path):
    return AppConfig(
        seed=3,
        out_dir=tmp_path / "out",
        synth=SynthConfig(n_subjects=2, per_cell=1, reps=10, tremor_levels=(0.0,)),
        model=ModelConfig(
            window=6, step=398, max_length=1200, d_model=8, heads=2, lstm_layers=1,
            dropout=0.0, conv_spec=[(4, 3)], classifier_hidden=8,
        ),
        train=TrainConfig(epochs=1, batch_size=256, pair_fraction=0.1, seed=3),
    )


def _fake_train(state, config):
    path = Path(state["out_dir"]) / "model.ckpt"
    path.write_bytes(b"stub")
    return {"checkpoint_path": str(path), "history": []}


def _fake_evaluate(state, config, jobs=1):
    return {"report_dir": str(Path(state["out_dir"]) / "report"), "scores": {}}


def test_graph_runs_steps_in_order(pipeline_config):
    graph = build_pipeline_graph(pipeline_config).get_graph()
    assert set(STEPS) <= set(graph.nodes)
    edges = {(e.source, e.target) for e in graph.edges}
    assert ("__start__", "synth") in edges
    assert ("evaluate", "__end__") in edges
    for before, after in zip(STEPS, STEPS[1:]):
        assert (before, after) in edges


def test_pipeline_carries_paths_between_steps(pipeline_config, tmp_path, mocker):
    mocker.patch("repsense.graphs.pipeline.train_node", side_effect=_fake_train)
    mocker.patch("repsense.graphs.pipeline.evaluate_node", side_effect=_fake_evaluate)

    result = run_pipeline(pipeline_config, thread_id="t1", checkpoint_db=tmp_path / "ck.db")

    assert result["n_recordings"] == 10
    assert result["n_segments"] > 0
    assert result["n_pairs"] > 0
    assert Path(result["labels_path"]).exists()
    lines = Path(result["pairs_path"]).read_text(encoding="utf-8").splitlines()
    assert len(lines) == result["n_pairs"]
    assert json.loads(lines[0])["metric"] == "ROM"
    assert result["report_dir"].endswith("report")


def test_failed_run_resumes_at_failing_step(pipeline_config, tmp_path, mocker):
    db = tmp_path / "ck.db"
    synth = mocker.patch("repsense.graphs.pipeline.synth_node", side_effect=synth_node)
    train = mocker.patch("repsense.graphs.pipeline.train_node", side_effect=RuntimeError("out of memory"))
    evaluate = mocker.patch("repsense.graphs.pipeline.evaluate_node", side_effect=_fake_evaluate)

    with pytest.raises(RuntimeError, match="out of memory"):
        run_pipeline(pipeline_config, thread_id="t2", checkpoint_db=db)
    assert synth.call_count == 1
    assert evaluate.call_count == 0

    train.side_effect = _fake_train
    result = run_pipeline(pipeline_config, thread_id="t2", checkpoint_db=db)

    # finished steps are not repeated
    assert synth.call_count == 1
    assert train.call_count == 2
    assert evaluate.call_count == 1
    assert Path(result["checkpoint_path"]).read_bytes() == b"stub"


def test_separate_threads_do_not_share_progress(pipeline_config, tmp_path, mocker):
    db = tmp_path / "ck.db"
    mocker.patch("repsense.graphs.pipeline.train_node", side_effect=_fake_train)
    mocker.patch("repsense.graphs.pipeline.evaluate_node", side_effect=_fake_evaluate)
    synth = mocker.patch("repsense.graphs.pipeline.synth_node", side_effect=synth_node)

    run_pipeline(pipeline_config, thread_id="a", checkpoint_db=db)
    run_pipeline(pipeline_config, thread_id="b", checkpoint_db=db)
    assert synth.call_count == 2


@pytest.mark.slow
def test_full_pipeline_writes_report(pipeline_config, tmp_path):
    result = run_pipeline(pipeline_config, thread_id="full", checkpoint_db=tmp_path / "ck.db")
    report_dir = Path(result["report_dir"])
    report = json.loads((report_dir / "report.json").read_text(encoding="utf-8"))
    assert report["metric"] == "ROM"
    assert len(report["folds"]) == 2
    assert (report_dir / "confusion.svg").exists()
    assert Path(result["checkpoint_path"]).exists()
