"""
Tests for the multi-task loss, the training loop and cross-validation.

The overfit check trains for up to 200 epochs and only runs with --slow.

Run:
    pytest tests/test_trainer.py -v
    pytest tests/test_trainer.py -v --slow
"""

import math
import warnings

import pytest
import torch

from repsense.errors import ParameterError, TrainingError
from repsense.models import Fold, MetricKind, ModelConfig, TrainConfig
from repsense.network import SiameseNet
from repsense.training import cross_validate, loss, r_squared, split, train, train_all
from repsense.training.trainer import predict_pairs, window_cache
from repsense.utils.dataset import build_dataset


@pytest.fixture
def rom_dataset(labelled_segments, metric_config):
    return build_dataset(labelled_segments, MetricKind.ROM, metric_config)


@pytest.fixture
def quick_train():
    return TrainConfig(epochs=2, batch_size=128, pair_fraction=0.2, seed=3)


# ---------------------------------------------------------------- loss


def test_similarity_loss_example():
    pred = torch.tensor([0.5])
    value = loss(pred, torch.tensor([1.0]), torch.zeros(1, 5), torch.tensor([0]), alpha=0.0)
    assert float(value) == pytest.approx(0.25)


def test_uniform_logits_cost_log_class_count():
    value = loss(torch.tensor([1.0]), torch.tensor([1.0]), torch.zeros(1, 5), torch.tensor([2]), alpha=2.0)
    assert float(value) == pytest.approx(2.0 * math.log(5))


def test_loss_from_probabilities_matches_logits():
    logits = torch.tensor([[2.0, -1.0, 0.5]])
    target = torch.tensor([0])
    sim, y = torch.tensor([0.2]), torch.tensor([0.6])
    from_logits = loss(sim, y, logits, target)
    from_probs = loss(sim, y, torch.softmax(logits, dim=-1), target, from_probs=True)
    assert float(from_logits) == pytest.approx(float(from_probs), rel=1e-6)


# ---------------------------------------------------------------- training loop


def test_same_seed_gives_identical_history(rom_dataset, tiny_config, quick_train):
    fold = split(rom_dataset.segments, "loocv", seed=0).folds[0]
    first = train(rom_dataset, fold, tiny_config, quick_train)
    second = train(rom_dataset, fold, tiny_config, quick_train)
    assert len(first.history) == 2
    assert first.history == second.history
    for name, tensor in first.model.state_dict().items():
        assert torch.equal(tensor, second.model.state_dict()[name]), name


def test_scaler_is_fit_on_training_segments(rom_dataset, tiny_config, quick_train):
    fold = split(rom_dataset.segments, "loocv", seed=0).folds[0]
    result = train(rom_dataset, fold, tiny_config, quick_train)
    assert result.scaler.fit_source == "train"
    assert 1 <= result.best_epoch <= 2


def test_zero_alpha_leaves_classifier_untouched(rom_dataset, tiny_config, quick_train):
    """With no classification term the classifier never receives a gradient."""
    cfg = quick_train.model_copy(update={"alpha": 0.0})
    fold = split(rom_dataset.segments, "loocv", seed=0).folds[0]
    torch.manual_seed(cfg.seed)
    initial = SiameseNet(tiny_config).classifier.state_dict()
    result = train(rom_dataset, fold, tiny_config, cfg)
    for name, tensor in result.model.classifier.state_dict().items():
        assert torch.equal(tensor, initial[name]), name


def test_fold_without_training_segments_is_rejected(rom_dataset, tiny_config, quick_train):
    fold = Fold(fold_id=0, assignments={s.segment_id: "test" for s in rom_dataset.segments})
    with pytest.raises(ParameterError, match="no training segments"):
        train(rom_dataset, fold, tiny_config, quick_train)


def test_segments_longer_than_max_length_are_rejected(rom_dataset, tiny_config, quick_train):
    short = tiny_config.model_copy(update={"max_length": 60, "step": 18})
    with pytest.raises(ParameterError, match="max_length"):
        train_all(rom_dataset, short, quick_train)


def test_non_finite_loss_stops_training(rom_dataset, tiny_config, quick_train, mocker):
    mocker.patch("repsense.training.trainer.loss", return_value=torch.tensor(float("nan"), requires_grad=True))
    with pytest.raises(TrainingError, match="non-finite loss"):
        train_all(rom_dataset, tiny_config, quick_train)


def test_cross_validate_reports_every_fold(rom_dataset, tiny_config):
    cfg = TrainConfig(epochs=1, batch_size=256, pair_fraction=0.1, seed=1)
    plan = split(rom_dataset.segments, "loocv", seed=1)
    report = cross_validate(rom_dataset, plan, tiny_config, cfg)
    assert [f.held_out for f in report.folds] == ["S00", "S01"]
    assert report.metric is MetricKind.ROM
    assert len(report.confusion) == 5
    # every test segment lands in exactly one confusion cell
    assert sum(map(sum, report.confusion)) == len(rom_dataset.segments)
    assert 0.0 <= report.accuracy <= 1.0
    assert report.runtime_seconds > 0


def test_parallel_folds_match_serial_run(rom_dataset, tiny_config):
    """Worker processes reseed per fold, so jobs=2 reproduces jobs=1 exactly."""
    cfg = TrainConfig(epochs=1, batch_size=256, pair_fraction=0.1, seed=1, deterministic=True)
    plan = split(rom_dataset.segments, "loocv", seed=1)
    serial = cross_validate(rom_dataset, plan, tiny_config, cfg, jobs=1)
    parallel = cross_validate(rom_dataset, plan, tiny_config, cfg, jobs=2)
    assert parallel.folds == serial.folds
    assert parallel.scores == serial.scores
    assert parallel.confusion == serial.confusion


def test_training_loop_raises_no_tensor_conversion_warning(rom_dataset, tiny_config, quick_train):
    fold = split(rom_dataset.segments, "loocv", seed=0).folds[0]
    with warnings.catch_warnings():
        warnings.filterwarnings("error", message=".*requires_grad.*")
        result = train(rom_dataset, fold, tiny_config, quick_train)
    assert all(math.isfinite(h["train_loss"]) for h in result.history)


@pytest.mark.slow
def test_overfits_small_pair_set(labelled_segments, metric_config):
    """64 clean within-subject pairs are fit to R² >= 0.95 within 200 epochs at lr 1e-3."""
    chosen = []
    for degrees in (30, 60, 120, 150):
        cell = [
            s for s in labelled_segments
            if s.subject_id == "S00" and s.label.rom.degrees == degrees and "tr000" in s.recording_id
        ]
        chosen += cell[:2]
    dataset = build_dataset(chosen, MetricKind.ROM, metric_config)
    assert len(dataset.pairs) == 64

    model_cfg = ModelConfig(
        window=10, step=20, max_length=200, d_model=32, heads=2, lstm_layers=1,
        dropout=0.0, conv_spec=[(16, 3)], classifier_hidden=16,
    )
    # batches of 8 give 8 Adam steps per epoch
    train_cfg = TrainConfig(epochs=200, batch_size=8, lr=1e-3, alpha=0.0, pair_fraction=1.0, patience=200, seed=0)
    result = train_all(dataset, model_cfg, train_cfg)

    first, last = result.history[0]["train_loss"], result.history[-1]["train_loss"]
    assert last <= 0.5 * first

    windows = window_cache(dataset, result.model.config, result.scaler)
    y_hat = predict_pairs(result.model, windows, dataset.pairs)
    r2 = r_squared(dataset.pairs.label, y_hat)
    print(f"\n📉 overfit R² {r2:.4f} after {len(result.history)} epochs")
    assert r2 >= 0.95
