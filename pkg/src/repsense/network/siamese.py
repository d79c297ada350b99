"""Weight-shared Siamese encoder with cosine similarity and classification heads."""

import logging
from typing import Dict, NamedTuple, Optional, Tuple

import numpy as np
import torch
from torch import nn

from repsense.errors import TrainingError
from repsense.models import AxisScaler, ModelConfig
from repsense.network.layers import MultiHeadSelfAttention, SpatialEncoder, TemporalEncoder
from repsense.network.windows import stack_windows

logger = logging.getLogger(__name__)


class EncoderOutput(NamedTuple):
    A: torch.Tensor  # (B, n, d_model)
    pooled: torch.Tensor  # (B, n * d_model), row-flattened A
    attention: Optional[torch.Tensor] = None  # (B, H, n, n)


def cosine(a: torch.Tensor, b: torch.Tensor) -> torch.Tensor:
    """Row-wise cosine similarity; a zero-norm row scores 0."""
    dot = (a * b).sum(dim=-1)
    denom = a.norm(dim=-1) * b.norm(dim=-1)
    zero = denom == 0
    if bool(zero.any()):
        logger.warning("⚠️ Zero-norm encoder output, similarity set to 0")
    return torch.where(zero, torch.zeros_like(dot), dot / torch.where(zero, torch.ones_like(denom), denom))


class SiameseNet(nn.Module):
    """
    Multi-task Siamese network.

    Both branches run through the same encoder instance, so the signal and
    anchor share parameter storage. The classifier reads the signal branch.
    """

    def __init__(self, cfg: ModelConfig):
        super().__init__()
        self.config = cfg
        self.spatial = SpatialEncoder(cfg)
        self.temporal = TemporalEncoder(cfg)
        self.attention = MultiHeadSelfAttention(cfg) if cfg.use_attention else None
        self.classifier = nn.Sequential(
            nn.Linear(cfg.pooled_size, cfg.classifier_hidden),
            nn.ReLU(),
            nn.Linear(cfg.classifier_hidden, cfg.num_classes),
        )

    def encode(self, windows: torch.Tensor) -> EncoderOutput:
        """(B, n, k, 6) windows -> encoder output."""
        hr = self.temporal(self.spatial(windows))
        if self.attention is None:
            return EncoderOutput(A=hr, pooled=hr.flatten(1))
        A, weights = self.attention(hr)
        return EncoderOutput(A=A, pooled=A.flatten(1), attention=weights)

    def similarity(self, a: EncoderOutput, b: EncoderOutput) -> torch.Tensor:
        return cosine(a.pooled, b.pooled)

    def logits(self, encoded: EncoderOutput) -> torch.Tensor:
        return self.classifier(encoded.pooled)

    def forward(
        self, signal: torch.Tensor, anchor: torch.Tensor
    ) -> Tuple[torch.Tensor, torch.Tensor]:
        """Return (similarity (B,), class logits (B, num_classes))."""
        enc_signal = self.encode(signal)
        enc_anchor = self.encode(anchor)
        return self.similarity(enc_signal, enc_anchor), self.logits(enc_signal)


def parameter_count(model: nn.Module) -> int:
    return sum(p.numel() for p in model.parameters())


def _dtype(model: nn.Module) -> torch.dtype:
    return next(model.parameters()).dtype


def _as_tensor(x, model: nn.Module) -> torch.Tensor:
    return torch.as_tensor(x).to(_dtype(model))


# Single-example wrappers around the network stages.


@torch.no_grad()
def spatial_encode(window, model: SiameseNet) -> torch.Tensor:
    """(k, 6) window -> h^c of length d_model."""
    return model.spatial(_as_tensor(window, model)[None, None])[0, 0]


@torch.no_grad()
def temporal_encode(hc_sequence, model: SiameseNet) -> torch.Tensor:
    """(n, d_model) -> (n, d_model) hidden sequence."""
    return model.temporal(_as_tensor(hc_sequence, model)[None])[0]


@torch.no_grad()
def attend(hseq, model: SiameseNet) -> EncoderOutput:
    x = _as_tensor(hseq, model)[None]
    if model.attention is None:
        return EncoderOutput(A=x[0], pooled=x[0].flatten())
    A, weights = model.attention(x)
    return EncoderOutput(A=A[0], pooled=A[0].flatten(), attention=weights[0])


@torch.no_grad()
def encode(segment, model: SiameseNet, scaler: AxisScaler | None = None) -> EncoderOutput:
    windows = stack_windows([segment], model.config, scaler, dtype=_dtype(model))
    out = model.encode(windows)
    attention = out.attention[0] if out.attention is not None else None
    return EncoderOutput(A=out.A[0], pooled=out.pooled[0], attention=attention)


def similarity(e_i, e_j, model: SiameseNet, scaler: AxisScaler | None = None) -> float:
    """Cosine similarity of two segments' pooled encodings, in [-1, 1]."""
    a = encode(e_i, model, scaler).pooled
    b = encode(e_j, model, scaler).pooled
    return float(cosine(a, b))


def classify(segment, model: SiameseNet, scaler: AxisScaler | None = None) -> np.ndarray:
    """Class probabilities for one segment."""
    with torch.no_grad():
        pooled = encode(segment, model, scaler).pooled
        probs = torch.softmax(model.classifier(pooled[None]), dim=-1)[0]
    return probs.numpy().astype(np.float64)


def backward(loss: torch.Tensor, model: nn.Module) -> Dict[str, torch.Tensor]:
    """
    Reverse-mode gradients of a scalar loss for every named parameter.

    Raises:
        TrainingError: A gradient is NaN or infinite
    """
    names, params = zip(*model.named_parameters())
    grads = torch.autograd.grad(loss, params, allow_unused=True)
    result = {}
    for name, param, grad in zip(names, params, grads):
        grad = torch.zeros_like(param) if grad is None else grad
        if not bool(torch.isfinite(grad).all()):
            raise TrainingError(f"non-finite gradient for {name}", parameter=name)
        result[name] = grad
    return result
