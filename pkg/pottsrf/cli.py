"""Command-line interface for pottsrf.

Diagnostics go to stderr; stdout carries one JSON object per line.
"""

import argparse
import glob
import json
import logging
import os
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd

from pottsrf import __version__
from pottsrf.core.config import RunConfig
from pottsrf.core.exceptions import PottsError, UsageError
from pottsrf.core.models import TrialAggregate
from pottsrf.pipelines.clustering import ClusteringRunner
from pottsrf.pipelines.datasets import gen_three_circles, load_dataset
from pottsrf.pipelines.imaging import segment_image
from pottsrf.utils.atomic import atomic_write, atomic_write_many
from pottsrf.utils.csv import CsvExporter
from pottsrf.utils.images import load_image, save_label_map, save_membership_stack

logger = logging.getLogger("pottsrf.cli")

THREADS_ENV = "POTTS_THREADS"
REPORT_COLUMNS = [
    "run_id",
    "algorithm",
    "force",
    "accuracy",
    "iterations",
    "gap",
    "wall_time_s",
]
LOG_LEVEL_HELP = "DEBUG, INFO, WARNING or ERROR"


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _emit(record: Dict[str, Any]) -> None:
    sys.stdout.write(json.dumps(record, sort_keys=True) + "\n")
    sys.stdout.flush()


def _write_json(path: Path, text: str) -> Path:
    with atomic_write(path) as f:
        f.write(text + "\n")
    return path


def _resolve_threads(value: Optional[int]) -> Optional[int]:
    if value is not None:
        return value
    raw = os.environ.get(THREADS_ENV)
    if raw is None or not raw.strip():
        return None
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{THREADS_ENV} must be an integer, got {raw!r}")


def _load_config(args: argparse.Namespace, overrides: Dict[str, Any]) -> RunConfig:
    overrides = dict(overrides)
    overrides["threads"] = _resolve_threads(getattr(args, "threads", None))
    overrides["log_level"] = getattr(args, "log_level", None)
    if args.config:
        return RunConfig.from_file(args.config, overrides)
    return RunConfig.from_mapping({k: v for k, v in overrides.items() if v is not None})


def _parse_seed_counts(raw: str) -> List[int]:
    try:
        counts = [int(part) for part in raw.split(",") if part.strip()]
    except ValueError:
        raise UsageError(f"--seeds expects comma-separated integers, got {raw!r}")
    if not counts:
        raise UsageError("--seeds is empty")
    return counts


def _load_cluster_data(config: RunConfig):
    if config.data is None or config.labels is None:
        raise UsageError("--data and --labels (or data/labels keys) are required")
    return load_dataset(config.data, config.labels)


def cmd_gen(args: argparse.Namespace) -> int:
    """Write a Three-Circles dataset as points.csv and labels.csv."""
    dataset = gen_three_circles(
        rng_seed=args.seed,
        n_points=args.n_points,
        add_noise=not args.no_noise,
        arc_length=args.arc_length,
    )
    out = Path(args.out)
    points_path = out / "points.csv"
    labels_path = out / "labels.csv"
    existed = points_path.exists()
    CsvExporter.export_points(dataset.points, points_path)
    try:
        CsvExporter.export_labels(dataset.labels, labels_path)
    except BaseException:
        if not existed and points_path.exists():
            points_path.unlink()
        raise
    _emit(
        {
            "command": "gen",
            "dataset": dataset.name,
            "n_points": dataset.n_points,
            "points": str(points_path),
            "labels": str(labels_path),
        }
    )
    return 0


def _cluster_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    return {
        "data": args.data,
        "labels": args.labels,
        "output_dir": args.out,
        "algorithm": args.solver,
        "region_force": args.force,
        "alpha": args.alpha,
        "n_trials": args.trials,
        "rng_seed": args.seed,
        "stratified": True if args.stratified else None,
    }


def _aggregate_files(
    aggregate: TrialAggregate, out: Path, name: str
) -> Dict[Path, str]:
    """Aggregate JSON first, then one JSON per trial."""
    summary = aggregate.model_dump_json(indent=2, exclude={"trials"})
    files = {out / f"{name}.json": summary + "\n"}
    for trial in aggregate.trials or []:
        text = json.dumps(trial.summary(), indent=2, sort_keys=True)
        files[out / f"{name}_trial_{trial.trial}.json"] = text + "\n"
    return files


def cmd_cluster(args: argparse.Namespace) -> int:
    """Run seeded clustering trials and write aggregate and per-trial JSON."""
    overrides = _cluster_overrides(args)
    overrides["n_seeds"] = args.n_seeds
    config = _load_config(args, overrides)
    dataset = _load_cluster_data(config)
    aggregate = ClusteringRunner(config).run_trials(dataset)
    out = Path(config.output_dir or ".")
    files = _aggregate_files(aggregate, out, "aggregate")
    path = atomic_write_many(files)[0]
    record = aggregate.model_dump(exclude={"trials"})
    record.update({"command": "cluster", "output": str(path)})
    _emit(record)
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    """Run clustering trials for several labelled-set sizes."""
    counts = _parse_seed_counts(args.seeds)
    config = _load_config(args, _cluster_overrides(args))
    dataset = _load_cluster_data(config)
    aggregates = ClusteringRunner(config).sweep_seed_counts(dataset, counts)
    out = Path(config.output_dir or ".")
    files: Dict[Path, str] = {}
    outputs = []
    for aggregate in aggregates:
        staged = _aggregate_files(aggregate, out, f"aggregate_n{aggregate.n_seeds}")
        outputs.append(next(iter(staged)))
        files.update(staged)
    atomic_write_many(files)
    for aggregate, path in zip(aggregates, outputs):
        record = aggregate.model_dump(exclude={"trials"})
        record.update({"command": "sweep", "output": str(path)})
        _emit(record)
    return 0


def cmd_segment(args: argparse.Namespace) -> int:
    """Segment an image into K phases and write a label PNG plus a JSON report."""
    if args.k is not None and args.k < 2:
        raise UsageError(f"--k must be at least 2, got {args.k}")
    config = _load_config(
        args,
        {
            "k": args.k,
            "region_force": args.force,
            "algorithm": args.solver,
            "rng_seed": args.seed,
        },
    )
    params = config.image_params()
    image = load_image(args.image)
    result = segment_image(image, params, config.solver_config())

    save_label_map(result.labels, image.geometry, params.k, args.out_labels)
    record: Dict[str, Any] = {
        "run_id": (
            f"{Path(args.image).stem}-{config.algorithm}"
            f"-{params.region_force}-k{params.k}"
        ),
        "region_force": params.region_force,
        "k": params.k,
        "labels": str(args.out_labels),
    }
    record.update(result.report.summary())
    if args.out_report:
        _write_json(Path(args.out_report), json.dumps(record, indent=2, sort_keys=True))
    if args.out_history:
        CsvExporter.export_history(result.report, args.out_history)
    if args.out_phi:
        save_membership_stack(result.phi, image.geometry, args.out_phi)
    record["command"] = "segment"
    _emit(record)
    return 0


def _report_row(data: Dict[str, Any]) -> Dict[str, Any]:
    """Map an aggregate, trial or segmentation JSON to one report row."""
    if "mean_accuracy" in data:
        agg = TrialAggregate.model_validate(data)
        return {
            "run_id": agg.run_id,
            "algorithm": agg.algorithm,
            "force": agg.region_force,
            "accuracy": agg.mean_accuracy,
            "iterations": agg.mean_iterations,
            "gap": agg.mean_final_gap,
            "wall_time_s": agg.mean_wall_time_s,
        }
    if "report" in data:
        report = data["report"]
        return {
            "run_id": f"trial-{data['trial']}-seed{data['rng_seed']}",
            "algorithm": report["algorithm"],
            "force": data["region_force"],
            "accuracy": float(data["accuracy"]),
            "iterations": report["iterations"],
            "gap": report["final_gap"],
            "wall_time_s": report["wall_time_s"],
        }
    return {
        "run_id": data["run_id"],
        "algorithm": data["algorithm"],
        "force": data["region_force"],
        "accuracy": float("nan"),
        "iterations": data["iterations"],
        "gap": data["final_gap"],
        "wall_time_s": data["wall_time_s"],
    }


def cmd_report(args: argparse.Namespace) -> int:
    """Collect run JSON files into one CSV table."""
    paths = sorted({p for pattern in args.inputs for p in glob.glob(pattern)})
    rows = []
    for path in paths:
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
            rows.append(_report_row(data))
        except (OSError, ValueError, KeyError, TypeError) as e:
            logger.warning("Skipping %s: %s", path, e)
    if not rows:
        logger.error("No valid report inputs matched %s", args.inputs)
        return 2
    frame = pd.DataFrame(rows, columns=REPORT_COLUMNS)
    CsvExporter.export_frame(frame, args.out)
    _emit(
        {
            "command": "report",
            "rows": len(rows),
            "skipped": len(paths) - len(rows),
            "output": str(args.out),
        }
    )
    return 0


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="key=value config file")
    parser.add_argument(
        "--threads", type=int, help=f"worker threads, else ${THREADS_ENV}"
    )
    parser.add_argument("--log-level", dest="log_level", help=LOG_LEVEL_HELP)
    parser.add_argument("--solver", choices=["pdhg", "admm"], help="Potts solver")
    parser.add_argument("--seed", type=int, help="base rng seed")


def _add_cluster_args(parser: argparse.ArgumentParser) -> None:
    _add_common(parser)
    parser.add_argument("--data", type=Path, help="points CSV")
    parser.add_argument("--labels", type=Path, help="labels CSV")
    parser.add_argument("--out", type=Path, help="output directory")
    parser.add_argument("--force", choices=["log", "linear"], help="region force")
    parser.add_argument("--alpha", type=float, help="constant TV weight")
    parser.add_argument("--trials", type=int, help="number of trials")
    parser.add_argument(
        "--stratified", action="store_true", help="stratified seed draw"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="pottsrf", description=__doc__.splitlines()[0])
    parser.add_argument(
        "--version", action="version", version=f"pottsrf {__version__}"
    )
    sub = parser.add_subparsers(dest="command", parser_class=_ArgumentParser)
    sub.required = True

    gen = sub.add_parser("gen", help="generate a synthetic dataset")
    gen.add_argument("dataset", choices=["three-circles"])
    gen.add_argument("--out", type=Path, required=True, help="output directory")
    gen.add_argument("--seed", type=int, default=0, help="rng seed")
    gen.add_argument("--n-points", dest="n_points", type=int, default=6000)
    gen.add_argument(
        "--arc-length",
        dest="arc_length",
        action="store_true",
        help="pick circles proportionally to their length",
    )
    gen.add_argument(
        "--no-noise",
        dest="no_noise",
        action="store_true",
        help="keep points exactly on their circles",
    )
    gen.add_argument("--log-level", dest="log_level", help=LOG_LEVEL_HELP)
    gen.set_defaults(func=cmd_gen)

    cluster = sub.add_parser("cluster", help="run seeded clustering trials")
    _add_cluster_args(cluster)
    cluster.add_argument(
        "--n-seeds", dest="n_seeds", type=int, help="labelled points per trial"
    )
    cluster.set_defaults(func=cmd_cluster)

    sweep = sub.add_parser("sweep", help="run trials for several labelled-set sizes")
    _add_cluster_args(sweep)
    sweep.add_argument(
        "--seeds", default="50,75,100", help="comma-separated seed counts"
    )
    sweep.set_defaults(func=cmd_sweep)

    segment = sub.add_parser("segment", help="segment an image")
    _add_common(segment)
    segment.add_argument("--image", type=Path, required=True)
    segment.add_argument("--k", type=int, help="number of phases")
    segment.add_argument(
        "--force", choices=["log", "linear", "l2"], help="region force"
    )
    segment.add_argument("--out-labels", dest="out_labels", type=Path, required=True)
    segment.add_argument("--out-report", dest="out_report", type=Path)
    segment.add_argument(
        "--out-history",
        dest="out_history",
        type=Path,
        help="per-iteration energies CSV",
    )
    segment.add_argument(
        "--out-phi",
        dest="out_phi",
        type=Path,
        help="directory for per-class membership PGMs",
    )
    segment.set_defaults(func=cmd_segment)

    report = sub.add_parser("report", help="tabulate run JSON files")
    report.add_argument("--inputs", nargs="+", required=True, help="glob pattern(s)")
    report.add_argument("--out", type=Path, required=True, help="output CSV")
    report.add_argument("--log-level", dest="log_level", help=LOG_LEVEL_HELP)
    report.set_defaults(func=cmd_report)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "log_level", None):
            level = args.log_level.upper()
            if level not in {"DEBUG", "INFO", "WARNING", "ERROR"}:
                raise UsageError(f"unknown log level {args.log_level!r}")
            logging.getLogger().setLevel(getattr(logging, level))
        return args.func(args)
    except PottsError as e:
        logger.error("%s", e)
        return e.exit_code
    except OSError as e:
        logger.error("I/O error: %s", e)
        return 2


if __name__ == "__main__":
    sys.exit(main())
