"""Leave-one-subject-out and per-subject 70/10/20 split plans."""

from collections import defaultdict
from typing import Dict, List, Literal, Sequence

import numpy as np
from sklearn.model_selection import LeaveOneGroupOut

from repsense.errors import ParameterError
from repsense.models import Fold, Segment, SplitPlan

VAL_FRACTION = 0.1
STANDARD_CUTS = (0.7, 0.8)


def _by_subject(ids: Sequence[str], subjects: Sequence[str]) -> Dict[str, List[str]]:
    groups: Dict[str, List[str]] = defaultdict(list)
    for seg_id, subject in zip(ids, subjects):
        groups[subject].append(seg_id)
    return {k: sorted(v) for k, v in sorted(groups.items())}


def loocv_plan(segments: Sequence[Segment], seed: int) -> SplitPlan:
    ids = [s.segment_id for s in segments]
    subjects = [s.subject_id for s in segments]
    if len(set(subjects)) < 2:
        raise ParameterError("leave-one-subject-out needs at least 2 subjects")

    folds = []
    logo = LeaveOneGroupOut()
    for fold_id, (train_idx, test_idx) in enumerate(logo.split(ids, groups=subjects)):
        rng = np.random.default_rng([seed, fold_id])
        assignments = {ids[i]: "test" for i in test_idx}
        train_groups = _by_subject([ids[i] for i in train_idx], [subjects[i] for i in train_idx])
        for members in train_groups.values():
            n_val = int(round(VAL_FRACTION * len(members)))
            order = rng.permutation(len(members))
            for rank, pos in enumerate(order):
                assignments[members[pos]] = "val" if rank < n_val else "train"
        folds.append(
            Fold(fold_id=fold_id, held_out=subjects[test_idx[0]], assignments=dict(sorted(assignments.items())))
        )
    return SplitPlan(mode="loocv", seed=seed, folds=folds)


def standard_plan(segments: Sequence[Segment], seed: int) -> SplitPlan:
    """One fold; every subject's segments are split 70/10/20."""
    rng = np.random.default_rng(seed)
    groups = _by_subject([s.segment_id for s in segments], [s.subject_id for s in segments])
    assignments = {}
    for members in groups.values():
        n = len(members)
        cut_train, cut_val = (int(round(c * n)) for c in STANDARD_CUTS)
        for rank, pos in enumerate(rng.permutation(n)):
            if rank < cut_train:
                role = "train"
            elif rank < cut_val:
                role = "val"
            else:
                role = "test"
            assignments[members[pos]] = role
    return SplitPlan(
        mode="standard", seed=seed, folds=[Fold(fold_id=0, assignments=dict(sorted(assignments.items())))]
    )


def split(
    segments: Sequence[Segment], mode: Literal["loocv", "standard"], seed: int
) -> SplitPlan:
    """
    Assign every segment a train/val/test role per fold.

    Args:
        segments: Anything with segment_id and subject_id
        mode: loocv holds out one subject per fold; standard splits each
            subject 70/10/20
        seed: Equal seeds give identical plans
    """
    if mode == "loocv":
        return loocv_plan(segments, seed)
    if mode == "standard":
        return standard_plan(segments, seed)
    raise ParameterError(f"unknown split mode {mode!r}")
