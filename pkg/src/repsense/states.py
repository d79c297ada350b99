from typing import Any, Dict, List, TypedDict


class PipelineState(TypedDict, total=False):
    """
    State passed through the end-to-end pipeline.

    Only paths and small summaries live here; signals stay on disk so a
    checkpointed run can resume from any finished step.
    """

    out_dir: str

    # Corpus
    corpus_dir: str
    manifest_path: str
    n_recordings: int

    # Segmentation and labels
    cuts_dir: str
    n_cuts: int
    labels_path: str
    n_segments: int
    pairs_path: str
    n_pairs: int

    # Model
    fold: int
    checkpoint_path: str
    history: List[Dict[str, float]]
    report_dir: str
    scores: Dict[str, Any]
