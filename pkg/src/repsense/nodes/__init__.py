"""Node functions for the pipeline."""

from .data import label_node, pairs_node, segment_node, synth_node
from .model import evaluate_node, load_dataset, train_node

__all__ = [
    # Data nodes
    "synth_node",
    "segment_node",
    "label_node",
    "pairs_node",
    # Model nodes
    "train_node",
    "evaluate_node",
    "load_dataset",
]
