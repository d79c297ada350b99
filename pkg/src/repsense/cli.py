"""Command-line entry point: `repsense <subcommand> [flags]`."""

import argparse
import sys
from pathlib import Path
from typing import Any, Dict, List

from dotenv import load_dotenv
from pydantic import ValidationError

from repsense.config import AppConfig, load_config
from repsense.errors import EXIT_DATA, EXIT_OK, EXIT_USAGE, DataError, ParameterError, RepsenseError
from repsense.graphs.pipeline import build_pipeline_graph, run_pipeline
from repsense.imu.io import read_recording
from repsense.metrics.pairs import read_labels, write_labels, write_pair_manifest
from repsense.models import Exercise, MetricKind
from repsense.network.checkpoint import load_checkpoint
from repsense.network.siamese import classify, similarity
from repsense.nodes import evaluate_node, load_dataset, train_node
from repsense.segmentation.cuts import read_cutset, segment_recording, write_cutset
from repsense.synth.generator import generate_corpus
from repsense.training.studies import STUDIES, run_study, write_study
from repsense.utils.dataset import (
    build_dataset,
    label_recordings,
    load_recordings,
    pair_records,
    read_manifest,
    segments_from_labels,
    true_cuts,
)
from repsense.utils.logging_setup import setup_logging
from repsense.utils.plotting import plot_energy, write_energy_csv


def _set(tree: Dict[str, Any], dotted: str, value: Any) -> None:
    *parents, leaf = dotted.split(".")
    for key in parents:
        tree = tree.setdefault(key, {})
    tree[leaf] = value


# flag dest -> AppConfig path
CONFIG_FLAGS = {
    "out_dir": "out_dir",
    "log_level": "log_level",
    "subjects": "synth.n_subjects",
    "per_cell": "synth.per_cell",
    "reps": "synth.reps",
    "tremor_levels": "synth.tremor_levels",
    "exercises": "synth.exercises",
    "expected_reps": "segmentation.expected_reps",
    "smoothing": "segmentation.smoothing",
    "weights": "segmentation.weights",
    "metric": "train.metric",
    "exercise": "train.exercise",
    "split": "train.split",
    "epochs": "train.epochs",
}


def config_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    """Nested overrides for every flag given explicitly on the command line."""
    overrides: Dict[str, Any] = {}
    if getattr(args, "seed", None) is not None:
        overrides["seed"] = args.seed
        _set(overrides, "train.seed", args.seed)
    for dest, path in CONFIG_FLAGS.items():
        value = getattr(args, dest, None)
        if value is not None:
            _set(overrides, path, value)
    return overrides


def _out(config: AppConfig) -> Path:
    return Path(config.out_dir)


def _manifest_path(args: argparse.Namespace, config: AppConfig) -> Path:
    return Path(args.manifest) if args.manifest else _out(config) / "corpus" / "manifest.json"


def _labels_path(args: argparse.Namespace, config: AppConfig) -> Path:
    return Path(args.labels) if args.labels else _out(config) / "labels.json"


def _data_state(args: argparse.Namespace, config: AppConfig) -> Dict[str, Any]:
    manifest_path = _manifest_path(args, config)
    return {
        "out_dir": str(config.out_dir),
        "manifest_path": str(manifest_path),
        "corpus_dir": str(manifest_path.parent),
        "labels_path": str(_labels_path(args, config)),
    }


def cmd_synth(args: argparse.Namespace, config: AppConfig) -> int:
    corpus_dir = _out(config) / "corpus"
    manifest = generate_corpus(
        config.synth.n_subjects,
        config.synth.per_cell,
        config.seed,
        out_dir=corpus_dir,
        config=config.synth,
        metric_cfg=config.metrics,
    )
    print(
        f"✅ Generated {len(manifest.recordings)} recordings for "
        f"{len(manifest.subjects)} subjects in {corpus_dir}"
    )
    return EXIT_OK


def cmd_segment(args: argparse.Namespace, config: AppConfig) -> int:
    cuts_dir = _out(config) / "cuts"
    for csv_path in args.inputs:
        rec = read_recording(csv_path)
        series, cuts = segment_recording(rec, config.segmentation)
        path = write_cutset(cuts, cuts_dir / f"{rec.recording_id}.json")
        print(f"✂️ {rec.recording_id}: {len(cuts.cuts)} cuts -> {path}")
        if args.plot:
            plot_energy(rec, series, cuts, _out(config) / "plots" / f"{rec.recording_id}.svg")
            write_energy_csv(rec, series, cuts, _out(config) / "plots" / f"{rec.recording_id}.csv")
    return EXIT_OK


def cmd_label(args: argparse.Namespace, config: AppConfig) -> int:
    manifest = None
    manifest_path = _manifest_path(args, config)
    if args.manifest or (not args.inputs and manifest_path.exists()):
        manifest = read_manifest(manifest_path)

    if args.inputs:
        recordings = {r.recording_id: r for r in (read_recording(p) for p in args.inputs)}
    elif manifest is not None:
        recordings = load_recordings(manifest_path.parent, manifest)
    else:
        raise ParameterError("give recording CSVs or --manifest")

    rom: Dict[str, int] = {}
    if manifest is not None:
        rom = {e.recording_id: e.rom_degrees for e in manifest.recordings}
    if args.rom is not None:
        rom = {rec_id: rom.get(rec_id, args.rom) for rec_id in recordings}

    cuts_dir = Path(args.cuts_dir) if args.cuts_dir else _out(config) / "cuts"
    known = true_cuts(manifest) if (args.true_cuts and manifest is not None) else {}
    cuts = {}
    for rec_id in recordings:
        if rec_id in known:
            cuts[rec_id] = known[rec_id]
        elif (cuts_dir / f"{rec_id}.json").exists():
            cuts[rec_id] = read_cutset(cuts_dir / f"{rec_id}.json")
        else:
            raise DataError(f"no cuts for {rec_id}; run `repsense segment` first", path=str(cuts_dir))

    segments = label_recordings(recordings, cuts, rom, config.metrics)
    path = write_labels(segments, _labels_path(args, config))
    print(f"🏷️ Labelled {len(segments)} segments -> {path}")
    return EXIT_OK


def cmd_pairs(args: argparse.Namespace, config: AppConfig) -> int:
    manifest_path = _manifest_path(args, config)
    manifest = read_manifest(manifest_path)
    recordings = load_recordings(manifest_path.parent, manifest)
    segments = segments_from_labels(read_labels(_labels_path(args, config)), recordings)
    dataset = build_dataset(
        segments,
        config.train.metric,
        config.metrics,
        exercise=config.train.exercise,
        repetition_sizes=config.train.repetition_sizes,
    )
    path = write_pair_manifest(pair_records(dataset), _out(config) / "pairs.jsonl")
    print(f"🔗 {len(dataset.pairs)} {dataset.metric.value} pairs -> {path}")
    return EXIT_OK


def cmd_train(args: argparse.Namespace, config: AppConfig) -> int:
    state = {**_data_state(args, config), "fold": args.fold}
    if args.checkpoint:
        state["checkpoint_path"] = str(args.checkpoint)
    train_node(state, config)
    return EXIT_OK


def cmd_eval(args: argparse.Namespace, config: AppConfig) -> int:
    if args.jobs < 1:
        raise ParameterError("--jobs must be at least 1")
    update = evaluate_node(_data_state(args, config), config, jobs=args.jobs)
    for metric, s in update["scores"].items():
        print(f"{metric}: MSE {s['mse']:.4f}  MAE {s['mae']:.4f}  R-Square {s['r2']}")
    return EXIT_OK


def cmd_score(args: argparse.Namespace, config: AppConfig) -> int:
    loaded = load_checkpoint(args.checkpoint)
    loaded.model.eval()
    signal = read_recording(args.signal)
    anchor = read_recording(args.anchor)
    score = similarity(signal, anchor, loaded.model, loaded.scaler)
    print(f"similarity: {score:.6f}")
    if args.classify:
        probs = classify(signal, loaded.model, loaded.scaler)
        names = loaded.metadata.get("classes") or [str(i) for i in range(len(probs))]
        best = int(probs.argmax())
        print(f"class: {names[best]} (p={probs[best]:.3f})")
    return EXIT_OK


def cmd_plot(args: argparse.Namespace, config: AppConfig) -> int:
    rec = read_recording(args.input)
    series, cuts = segment_recording(rec, config.segmentation)
    if args.cuts:
        cuts = read_cutset(args.cuts)
    svg = plot_energy(rec, series, cuts, _out(config) / "plots" / f"{rec.recording_id}.svg")
    write_energy_csv(rec, series, cuts, svg.with_suffix(".csv"))
    print(f"📈 Energy plot -> {svg}")
    return EXIT_OK


def cmd_run(args: argparse.Namespace, config: AppConfig) -> int:
    result = run_pipeline(config, thread_id=args.thread_id, checkpoint_db=args.checkpoint_db, jobs=args.jobs)
    print(f"🏁 Pipeline finished: report in {result.get('report_dir')}")
    return EXIT_OK


def cmd_study(args: argparse.Namespace, config: AppConfig) -> int:
    dataset = load_dataset(_data_state(args, config), config)
    base = [s for s in dataset.segments if s.reps == 1]
    rows = run_study(
        args.name,
        base,
        config.train.metric,
        config.metrics,
        config.model,
        config.train,
        mode=config.train.split,
        exercise=dataset.exercise,
        jobs=args.jobs,
    )
    path = write_study(rows, _out(config) / "studies" / f"{args.name}.csv")
    for row in rows:
        print(f"{row.variant:>14}: mean R² {row.mean_r2}, accuracy {row.accuracy:.3f}")
    print(f"🧪 Study table -> {path}")
    return EXIT_OK


def cmd_graph(args: argparse.Namespace, config: AppConfig) -> int:
    graph = build_pipeline_graph(config)
    path = Path(args.output) if args.output else _out(config) / "pipeline.mmd"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(graph.get_graph().draw_mermaid(), encoding="utf-8")
    print(f"✓ Saved Mermaid syntax to {path}")
    return EXIT_OK


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help="Global seed")
    common.add_argument("--config", type=Path, help="TOML or JSON config file")
    common.add_argument("--out-dir", dest="out_dir", type=Path, help="Output directory")
    common.add_argument("--log-level", dest="log_level", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    return common


def _data_flags() -> argparse.ArgumentParser:
    data = argparse.ArgumentParser(add_help=False)
    data.add_argument("--manifest", type=Path, help="Corpus manifest.json")
    data.add_argument("--labels", type=Path, help="Label JSON written by `label`")
    data.add_argument("--metric", choices=[m.value for m in MetricKind])
    data.add_argument("--exercise", choices=[e.value for e in Exercise])
    return data


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="repsense", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    common, data = _common_flags(), _data_flags()

    p = sub.add_parser("synth", parents=[common], help="Generate a synthetic corpus")
    p.add_argument("--subjects", type=int)
    p.add_argument("--per-cell", dest="per_cell", type=int)
    p.add_argument("--reps", type=int)
    p.add_argument("--tremor-levels", dest="tremor_levels", type=float, nargs="+")
    p.add_argument("--exercises", choices=[e.value for e in Exercise], nargs="+")
    p.set_defaults(handler=cmd_synth)

    p = sub.add_parser("segment", parents=[common], help="Propose repetition cuts")
    p.add_argument("inputs", nargs="+", type=Path, help="Recording CSVs")
    p.add_argument("--expected-reps", dest="expected_reps", type=int)
    p.add_argument("--smoothing", type=float)
    p.add_argument("--weights", type=float, nargs=3)
    p.add_argument("--plot", action="store_true", help="Write SVG and CSV energy plots")
    p.set_defaults(handler=cmd_segment)

    p = sub.add_parser("label", parents=[common], help="Label segments")
    p.add_argument("inputs", nargs="*", type=Path, help="Recording CSVs (default: whole manifest)")
    p.add_argument("--manifest", type=Path)
    p.add_argument("--labels", type=Path, help="Output label JSON")
    p.add_argument("--cuts-dir", dest="cuts_dir", type=Path)
    p.add_argument("--true-cuts", dest="true_cuts", action="store_true", help="Use manifest boundaries")
    p.add_argument("--rom", type=int, help="ROM class for recordings without a manifest entry")
    p.set_defaults(handler=cmd_label)

    p = sub.add_parser("pairs", parents=[common, data], help="Write the pair manifest")
    p.set_defaults(handler=cmd_pairs)

    p = sub.add_parser("train", parents=[common, data], help="Train one fold")
    p.add_argument("--split", choices=["loocv", "standard"])
    p.add_argument("--fold", type=int, default=0)
    p.add_argument("--epochs", type=int)
    p.add_argument("--checkpoint", type=Path, help="Checkpoint path (default: <out-dir>/model.ckpt)")
    p.set_defaults(handler=cmd_train)

    p = sub.add_parser("eval", parents=[common, data], help="Cross-validate and report")
    p.add_argument("--split", choices=["loocv", "standard"])
    p.add_argument("--epochs", type=int)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(handler=cmd_eval)

    p = sub.add_parser("score", parents=[common], help="Score a signal against an anchor")
    p.add_argument("signal", type=Path)
    p.add_argument("anchor", type=Path)
    p.add_argument("checkpoint", type=Path)
    p.add_argument("--classify", action="store_true")
    p.set_defaults(handler=cmd_score)

    p = sub.add_parser("plot", parents=[common], help="Energy plot of a recording")
    p.add_argument("input", type=Path)
    p.add_argument("--cuts", type=Path, help="CutSet JSON to draw instead of proposed cuts")
    p.add_argument("--smoothing", type=float)
    p.set_defaults(handler=cmd_plot)

    p = sub.add_parser("run", parents=[common], help="Run the full pipeline")
    p.add_argument("--thread-id", dest="thread_id", default="default")
    p.add_argument("--checkpoint-db", dest="checkpoint_db", type=Path)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(handler=cmd_run)

    p = sub.add_parser("study", parents=[common, data], help="Parameter or ablation study")
    p.add_argument("name", choices=sorted(STUDIES))
    p.add_argument("--split", choices=["loocv", "standard"])
    p.add_argument("--epochs", type=int)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(handler=cmd_study)

    p = sub.add_parser("graph", parents=[common], help="Write the pipeline as Mermaid")
    p.add_argument("--output", type=Path)
    p.set_defaults(handler=cmd_graph)

    return parser


def main(argv: List[str] | None = None) -> int:
    load_dotenv()
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config, config_overrides(args))
    except ValidationError as e:
        print(f"❌ Invalid configuration: {e}", file=sys.stderr)
        return EXIT_USAGE
    except RepsenseError as e:
        print(f"❌ {e}", file=sys.stderr)
        return e.exit_code
    setup_logging(config.log_level)

    try:
        return args.handler(args, config)
    except ValidationError as e:
        print(f"❌ Invalid value: {e}", file=sys.stderr)
        return EXIT_USAGE
    except RepsenseError as e:
        print(f"❌ {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
