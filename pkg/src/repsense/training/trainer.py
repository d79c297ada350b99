"""Mini-batch training of the Siamese network on within-subject pairs."""

import copy
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Sequence

import numpy as np
import torch

from repsense.errors import ParameterError, TrainingError
from repsense.imu.scaler import fit_scaler
from repsense.models import AxisScaler, Fold, ModelConfig, TrainConfig
from repsense.network.siamese import SiameseNet, backward, cosine
from repsense.network.windows import stack_windows
from repsense.training.losses import loss
from repsense.utils.dataset import Dataset, PairIndex

logger = logging.getLogger(__name__)

ENCODE_BATCH = 256


@dataclass
class TrainResult:
    model: SiameseNet
    scaler: AxisScaler
    history: List[Dict[str, float]] = field(default_factory=list)
    best_epoch: int = 0


def configure_torch(seed: int, deterministic: bool) -> None:
    torch.manual_seed(seed)
    if deterministic:
        torch.use_deterministic_algorithms(True)
        torch.set_num_threads(1)


def fit_model_config(cfg: ModelConfig, dataset: Dataset) -> ModelConfig:
    """Match the classifier width to the dataset and check segment lengths."""
    longest = max(s.length for s in dataset.segments)
    if longest > cfg.max_length:
        raise ParameterError(
            f"longest segment has {longest} samples but model.max_length is "
            f"{cfg.max_length}; raise model.max_length in the config"
        )
    return ModelConfig.model_validate({**cfg.model_dump(), "num_classes": dataset.num_classes})


def window_cache(dataset: Dataset, cfg: ModelConfig, scaler: AxisScaler, dtype=torch.float32) -> torch.Tensor:
    """Windows of every dataset segment, (N, n, k, 6)."""
    return stack_windows(dataset.segments, cfg, scaler, dtype=dtype)


@torch.no_grad()
def encode_positions(model: SiameseNet, windows: torch.Tensor, positions: np.ndarray) -> Dict[int, torch.Tensor]:
    """Pooled eval-mode encodings of the given segment positions."""
    was_training = model.training
    model.eval()
    pooled: Dict[int, torch.Tensor] = {}
    unique = np.unique(positions)
    for start in range(0, len(unique), ENCODE_BATCH):
        chunk = unique[start : start + ENCODE_BATCH]
        out = model.encode(windows[torch.from_numpy(chunk)])
        for pos, row in zip(chunk.tolist(), out.pooled):
            pooled[pos] = row
    model.train(was_training)
    return pooled


@torch.no_grad()
def predict_pairs(model: SiameseNet, windows: torch.Tensor, pairs: PairIndex) -> np.ndarray:
    """Eval-mode similarity for every pair."""
    if len(pairs) == 0:
        return np.zeros(0)
    pooled = encode_positions(model, windows, np.concatenate([pairs.signal, pairs.anchor]))
    a = torch.stack([pooled[i] for i in pairs.signal.tolist()])
    b = torch.stack([pooled[i] for i in pairs.anchor.tolist()])
    return cosine(a, b).double().numpy()


def _sample_rows(rng: np.random.Generator, n_pairs: int, fraction: float) -> np.ndarray:
    n = max(1, int(round(fraction * n_pairs)))
    return rng.permutation(n_pairs)[:n]


def train(
    dataset: Dataset,
    fold: Fold,
    model_cfg: ModelConfig,
    train_cfg: TrainConfig,
    scaler: AxisScaler | None = None,
    dtype: torch.dtype = torch.float32,
) -> TrainResult:
    """
    Train one model on a fold's training pairs.

    Each epoch samples train_cfg.pair_fraction of the training pairs in a
    seeded order, runs Adam over mini-batches and scores the validation
    pairs; the state with the lowest validation MSE is kept, and training
    stops after `patience` epochs without improvement.

    Args:
        dataset: Labelled segments and their within-subject pairs
        fold: Role assignment; only pairs inside one role are used
        model_cfg: Network architecture (num_classes is taken from dataset)
        train_cfg: Optimisation settings
        scaler: Fitted on the fold's training segments when omitted
        dtype: Parameter dtype

    Returns:
        TrainResult with the best-validation model and per-epoch history.

    Raises:
        TrainingError: A loss or gradient became NaN or infinite
    """
    configure_torch(train_cfg.seed, train_cfg.deterministic)
    cfg = fit_model_config(model_cfg, dataset)
    train_ids, val_ids = fold.ids("train"), fold.ids("val")
    if not train_ids:
        raise ParameterError(f"fold {fold.fold_id} has no training segments")
    if scaler is None:
        scaler = fit_scaler([dataset.segments[i] for i in dataset.positions(train_ids)])

    windows = window_cache(dataset, cfg, scaler, dtype)
    targets = torch.from_numpy(dataset.targets)
    train_pairs = dataset.pairs_within(train_ids)
    val_pairs = dataset.pairs_within(val_ids)
    if len(train_pairs) == 0:
        raise ParameterError(f"fold {fold.fold_id} has no training pairs")
    if len(val_pairs) == 0:
        logger.warning("⚠️ Fold %d has no validation pairs, monitoring training pairs", fold.fold_id)
        val_pairs = train_pairs

    model = SiameseNet(cfg).to(dtype)
    optimizer = torch.optim.Adam(model.parameters(), lr=train_cfg.lr, betas=train_cfg.betas)
    rng = np.random.default_rng([train_cfg.seed, fold.fold_id])

    result = TrainResult(model=model, scaler=scaler)
    best_val, best_state, stale = float("inf"), copy.deepcopy(model.state_dict()), 0
    for epoch in range(1, train_cfg.epochs + 1):
        model.train()
        rows = _sample_rows(rng, len(train_pairs), train_cfg.pair_fraction)
        running, seen = 0.0, 0
        for start in range(0, len(rows), train_cfg.batch_size):
            batch = train_pairs.take(rows[start : start + train_cfg.batch_size])
            sig = torch.from_numpy(batch.signal)
            anc = torch.from_numpy(batch.anchor)
            pred_sim, logits = model(windows[sig], windows[anc])
            value = loss(
                pred_sim,
                torch.from_numpy(batch.label).to(dtype),
                logits,
                targets[sig],
                train_cfg.alpha,
            )
            if not bool(torch.isfinite(value)):
                raise TrainingError(
                    f"non-finite loss at epoch {epoch}, batch starting at pair {start}"
                )
            grads = backward(value, model)
            for name, param in model.named_parameters():
                param.grad = grads[name]
            optimizer.step()
            running += value.item() * len(batch)
            seen += len(batch)

        val_pred = predict_pairs(model, windows, val_pairs)
        val_mse = float(np.mean((val_pred - val_pairs.label) ** 2))
        train_loss = running / seen
        result.history.append({"epoch": epoch, "train_loss": train_loss, "val_mse": val_mse})
        logger.info("📉 Epoch %d: train loss %.5f, val MSE %.5f", epoch, train_loss, val_mse)

        if val_mse < best_val:
            best_val, best_state, stale = val_mse, copy.deepcopy(model.state_dict()), 0
            result.best_epoch = epoch
        else:
            stale += 1
            if stale >= train_cfg.patience:
                logger.info("⏹️ Early stop after epoch %d (best %d)", epoch, result.best_epoch)
                break

    model.load_state_dict(best_state)
    model.eval()
    return result


def train_all(
    dataset: Dataset,
    model_cfg: ModelConfig,
    train_cfg: TrainConfig,
    val_ids: Sequence[str] = (),
) -> TrainResult:
    """Train on every segment of the dataset (no held-out subject)."""
    val = set(val_ids)
    fold = Fold(
        fold_id=0,
        assignments={s.segment_id: ("val" if s.segment_id in val else "train") for s in dataset.segments},
    )
    return train(dataset, fold, model_cfg, train_cfg)
