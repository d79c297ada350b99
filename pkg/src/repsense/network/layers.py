"""
Encoder building blocks: convolutional spatial encoder, gate-explicit LSTM
and multi-head self-attention.

Every module consumes batch-first tensors; the window axis n is kept as a
sequence dimension throughout.
"""

import math
from typing import Tuple

import torch
from torch import nn

from repsense.models import ModelConfig

CHANNELS_IN = 6


class SpatialEncoder(nn.Module):
    """
    Per-window encoder producing h^c.

    Stacked same-padded Conv1d layers, each followed by ReLU, dropout and
    max-pool(2), flattened and projected linearly to d_model. With
    use_spatial off, the raw window is flattened and projected.
    """

    def __init__(self, cfg: ModelConfig):
        super().__init__()
        self.window = cfg.window
        self.d_model = cfg.d_model
        layers = []
        if cfg.use_spatial:
            in_ch = CHANNELS_IN
            for out_ch, kernel in cfg.conv_spec:
                layers += [
                    nn.Conv1d(in_ch, out_ch, kernel, padding=kernel // 2),
                    nn.ReLU(),
                    nn.Dropout(cfg.dropout),
                    nn.MaxPool1d(2),
                ]
                in_ch = out_ch
            flat = in_ch * (cfg.window >> len(cfg.conv_spec))
        else:
            flat = CHANNELS_IN * cfg.window
        self.conv = nn.Sequential(*layers)
        self.project = nn.Linear(flat, cfg.d_model)

    def forward(self, windows: torch.Tensor) -> torch.Tensor:
        # (..., k, 6) -> (..., d_model)
        lead = windows.shape[:-2]
        x = windows.reshape(-1, self.window, CHANNELS_IN).transpose(1, 2)
        x = self.conv(x).flatten(1)
        return self.project(x).reshape(*lead, self.d_model)


class LSTMLayer(nn.Module):
    """Single LSTM layer with named gate parameters W_g, U_g, b_g."""

    GATES = ("f", "i", "o", "c")

    def __init__(self, input_size: int, hidden_size: int):
        super().__init__()
        self.hidden_size = hidden_size
        bound = 1.0 / math.sqrt(hidden_size)
        for gate in self.GATES:
            self.register_parameter(
                f"W_{gate}", nn.Parameter(torch.empty(hidden_size, input_size).uniform_(-bound, bound))
            )
            self.register_parameter(
                f"U_{gate}", nn.Parameter(torch.empty(hidden_size, hidden_size).uniform_(-bound, bound))
            )
            self.register_parameter(
                f"b_{gate}", nn.Parameter(torch.empty(hidden_size).uniform_(-bound, bound))
            )

    def gate(self, name: str, x: torch.Tensor, h: torch.Tensor) -> torch.Tensor:
        W = getattr(self, f"W_{name}")
        U = getattr(self, f"U_{name}")
        b = getattr(self, f"b_{name}")
        return x @ W.T + h @ U.T + b

    def step(
        self, x: torch.Tensor, h: torch.Tensor, c: torch.Tensor
    ) -> Tuple[torch.Tensor, torch.Tensor]:
        f = torch.sigmoid(self.gate("f", x, h))
        i = torch.sigmoid(self.gate("i", x, h))
        o = torch.sigmoid(self.gate("o", x, h))
        c = f * c + i * torch.tanh(self.gate("c", x, h))
        return o * torch.tanh(c), c

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        # (B, n, d_in) -> (B, n, hidden); h0 = c0 = 0
        h = x.new_zeros(x.shape[0], self.hidden_size)
        c = x.new_zeros(x.shape[0], self.hidden_size)
        outputs = []
        for t in range(x.shape[1]):
            h, c = self.step(x[:, t], h, c)
            outputs.append(h)
        return torch.stack(outputs, dim=1)


class TemporalEncoder(nn.Module):
    """Stacked LSTM over the window sequence, dropout between layers."""

    def __init__(self, cfg: ModelConfig):
        super().__init__()
        self.enabled = cfg.use_temporal
        n_layers = cfg.lstm_layers if cfg.use_temporal else 0
        self.layers = nn.ModuleList(LSTMLayer(cfg.d_model, cfg.d_model) for _ in range(n_layers))
        self.dropout = nn.Dropout(cfg.dropout)

    def forward(self, hc: torch.Tensor) -> torch.Tensor:
        x = hc
        for idx, layer in enumerate(self.layers):
            x = layer(x)
            if idx < len(self.layers) - 1:
                x = self.dropout(x)
        return x


class MultiHeadSelfAttention(nn.Module):
    """Scaled dot-product self-attention with per-head projections and W_O."""

    def __init__(self, cfg: ModelConfig):
        super().__init__()
        self.heads = cfg.heads
        self.d_k = cfg.d_head
        shape = (cfg.heads, cfg.d_model, cfg.d_head)
        self.W_Q = nn.Parameter(torch.empty(shape))
        self.W_K = nn.Parameter(torch.empty(shape))
        self.W_V = nn.Parameter(torch.empty(shape))
        self.W_O = nn.Parameter(torch.empty(cfg.heads * cfg.d_head, cfg.d_model))
        for W in (self.W_Q, self.W_K, self.W_V):
            for h in range(cfg.heads):
                nn.init.xavier_uniform_(W.data[h])
        nn.init.xavier_uniform_(self.W_O.data)

    def forward(self, x: torch.Tensor) -> Tuple[torch.Tensor, torch.Tensor]:
        """
        Args:
            x: (B, n, d_model); queries, keys and values are all x

        Returns:
            Output (B, n, d_model) and attention weights (B, H, n, n).
        """
        q = torch.einsum("bnd,hdk->bhnk", x, self.W_Q)
        k = torch.einsum("bnd,hdk->bhnk", x, self.W_K)
        v = torch.einsum("bnd,hdk->bhnk", x, self.W_V)
        scores = q @ k.transpose(-1, -2) / math.sqrt(self.d_k)
        weights = torch.softmax(scores, dim=-1)
        heads = weights @ v
        concat = heads.transpose(1, 2).reshape(x.shape[0], x.shape[1], self.heads * self.d_k)
        return concat @ self.W_O, weights
