"""Energy-based repetition segmentation."""

from repsense.segmentation.cuts import (
    propose_cuts,
    read_cutset,
    segment_recording,
    split,
    write_cutset,
)
from repsense.segmentation.energy import energy, half_window, pointwise_energy

__all__ = [
    "energy",
    "half_window",
    "pointwise_energy",
    "propose_cuts",
    "read_cutset",
    "segment_recording",
    "split",
    "write_cutset",
]
