"""Node functions for corpus generation, segmentation and labelling."""

from pathlib import Path
from typing import Any, Dict

from repsense.config import AppConfig
from repsense.metrics.pairs import read_labels, write_labels, write_pair_manifest
from repsense.segmentation.cuts import read_cutset, segment_recording, write_cutset
from repsense.synth.generator import generate_corpus
from repsense.utils.dataset import (
    build_dataset,
    label_recordings,
    load_recordings,
    pair_records,
    read_manifest,
    segments_from_labels,
)


def _out_dir(state: Dict[str, Any], config: AppConfig) -> Path:
    return Path(state.get("out_dir") or config.out_dir)


def synth_node(state: Dict[str, Any], config: AppConfig) -> Dict[str, Any]:
    """
    Generate the synthetic corpus, unless the state already names one.

    Args:
        state: Pipeline state with out_dir, optionally manifest_path.
        config: Run configuration.

    Returns:
        Dict with corpus_dir, manifest_path and n_recordings.
    """
    if state.get("manifest_path"):
        manifest_path = Path(state["manifest_path"])
        manifest = read_manifest(manifest_path)
        return {
            "corpus_dir": str(manifest_path.parent),
            "n_recordings": len(manifest.recordings),
        }

    corpus_dir = _out_dir(state, config) / "corpus"
    manifest = generate_corpus(
        config.synth.n_subjects,
        config.synth.per_cell,
        config.seed,
        out_dir=corpus_dir,
        config=config.synth,
        metric_cfg=config.metrics,
    )
    return {
        "corpus_dir": str(corpus_dir),
        "manifest_path": str(corpus_dir / "manifest.json"),
        "n_recordings": len(manifest.recordings),
    }


def segment_node(state: Dict[str, Any], config: AppConfig) -> Dict[str, Any]:
    """Propose cuts for every corpus recording and write one CutSet each."""
    manifest = read_manifest(state["manifest_path"])
    recordings = load_recordings(state["corpus_dir"], manifest)
    cuts_dir = _out_dir(state, config) / "cuts"
    n_cuts = 0
    for rec_id, rec in recordings.items():
        _, cuts = segment_recording(rec, config.segmentation)
        write_cutset(cuts, cuts_dir / f"{rec_id}.json")
        n_cuts += len(cuts.cuts)
    print(f"✂️ Segmented {len(recordings)} recordings ({n_cuts} cuts)")
    return {"cuts_dir": str(cuts_dir), "n_cuts": n_cuts}


def label_node(state: Dict[str, Any], config: AppConfig) -> Dict[str, Any]:
    """Split at the stored cuts, measure instability and attach manifest ROM labels."""
    manifest = read_manifest(state["manifest_path"])
    recordings = load_recordings(state["corpus_dir"], manifest)
    cuts_dir = Path(state["cuts_dir"])
    cuts = {rec_id: read_cutset(cuts_dir / f"{rec_id}.json") for rec_id in recordings}
    rom = {e.recording_id: e.rom_degrees for e in manifest.recordings}
    segments = label_recordings(recordings, cuts, rom, config.metrics)
    labels_path = _out_dir(state, config) / "labels.json"
    write_labels(segments, labels_path)
    print(f"🏷️ Labelled {len(segments)} segments")
    return {"labels_path": str(labels_path), "n_segments": len(segments)}


def pairs_node(state: Dict[str, Any], config: AppConfig) -> Dict[str, Any]:
    """Write the within-subject pair manifest for the configured metric."""
    manifest = read_manifest(state["manifest_path"])
    recordings = load_recordings(state["corpus_dir"], manifest)
    segments = segments_from_labels(read_labels(state["labels_path"]), recordings)
    dataset = build_dataset(
        segments,
        config.train.metric,
        config.metrics,
        exercise=config.train.exercise,
        repetition_sizes=config.train.repetition_sizes,
    )
    pairs_path = _out_dir(state, config) / "pairs.jsonl"
    write_pair_manifest(pair_records(dataset), pairs_path)
    print(f"🔗 Wrote {len(dataset.pairs)} pairs")
    return {"pairs_path": str(pairs_path), "n_pairs": len(dataset.pairs)}
