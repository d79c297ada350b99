"""Quality metrics and similarity ground truth."""

from repsense.metrics.pairs import (
    build_pairs,
    group_by_subject,
    label_segment,
    merge_repetitions,
    pair_label,
    pair_matrix,
    read_labels,
    read_pair_manifest,
    write_labels,
    write_pair_manifest,
)
from repsense.metrics.quality import (
    coefficient_of_variation,
    instability,
    sim_repetition,
    sim_rom,
    sim_stability,
)

__all__ = [
    "build_pairs",
    "group_by_subject",
    "label_segment",
    "merge_repetitions",
    "pair_label",
    "pair_matrix",
    "read_labels",
    "read_pair_manifest",
    "write_labels",
    "write_pair_manifest",
    "coefficient_of_variation",
    "instability",
    "sim_repetition",
    "sim_rom",
    "sim_stability",
]
