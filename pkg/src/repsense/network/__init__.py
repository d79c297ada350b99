"""Spatio-temporal Siamese network on torch."""

from repsense.network.checkpoint import (
    CHECKPOINT_VERSION,
    LoadedCheckpoint,
    load_checkpoint,
    save_checkpoint,
)
from repsense.network.layers import (
    LSTMLayer,
    MultiHeadSelfAttention,
    SpatialEncoder,
    TemporalEncoder,
)
from repsense.network.siamese import (
    EncoderOutput,
    SiameseNet,
    attend,
    backward,
    classify,
    cosine,
    encode,
    parameter_count,
    similarity,
    spatial_encode,
    temporal_encode,
)
from repsense.network.windows import WindowTensor, slide, stack_windows

__all__ = [
    # Checkpoints
    "CHECKPOINT_VERSION",
    "LoadedCheckpoint",
    "load_checkpoint",
    "save_checkpoint",
    # Layers
    "LSTMLayer",
    "MultiHeadSelfAttention",
    "SpatialEncoder",
    "TemporalEncoder",
    # Network
    "EncoderOutput",
    "SiameseNet",
    "attend",
    "backward",
    "classify",
    "cosine",
    "encode",
    "parameter_count",
    "similarity",
    "spatial_encode",
    "temporal_encode",
    # Windows
    "WindowTensor",
    "slide",
    "stack_windows",
]
