from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import TYPE_CHECKING, Any

import numpy as np
import pandas as pd
from pydantic import ValidationError

from streaming_icvi import exception as te
from streaming_icvi.core.const import (
    DEFAULT_SEED,
    EXIT_CONFIG_ERROR,
    EXIT_DATA_ERROR,
    EXIT_OK,
)
from streaming_icvi.core.types import (
    ClustererKind,
    IndexKind,
    MembershipTest,
    Presentation,
    SigmaDataMode,
)
from streaming_icvi.harness.data import generate_d4, ingest, write_dataset
from streaming_icvi.harness.runner import run_experiment
from streaming_icvi.harness.sweep import compare_conn
from streaming_icvi.log import get_logger, set_level
from streaming_icvi.model import (
    BatchCviParams,
    ExperimentConfig,
    SweepSettings,
    load_config,
)
from streaming_icvi.oracle import Partition, adjusted_rand_index, batch_cvi

if TYPE_CHECKING:
    from collections.abc import Sequence

__all__ = ["build_parser", "main"]

logger = get_logger("cli")

_CONFIG_FIELDS = (
    "dataset",
    "has_labels",
    "generator",
    "rho",
    "rho_a",
    "alpha",
    "beta",
    "clusterer",
    "epsilon",
    "pbm_exponent",
    "sigma_data",
    "membership",
    "indices",
    "presentation",
    "cluster_order",
    "seed",
    "records",
    "summary",
    "gnuplot",
    "conn_matrix",
    "network",
)


def _floats(value: str) -> tuple[float, ...]:
    return tuple(float(item) for item in value.split(",") if item.strip())


def _ints(value: str) -> tuple[int, ...]:
    return tuple(int(item) for item in value.split(",") if item.strip())


def _kinds(value: str) -> tuple[IndexKind, ...]:
    return tuple(IndexKind(item.strip()) for item in value.split(",") if item.strip())


def _add_experiment_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="TOML experiment configuration")
    data = parser.add_mutually_exclusive_group()
    data.add_argument("--dataset", type=Path, help="CSV data file")
    data.add_argument("--generator", choices=["d4"], help="generated data set")
    parser.add_argument(
        "--no-labels",
        dest="has_labels",
        action="store_const",
        const=False,
        help="the data file has no trailing label column",
    )
    parser.add_argument("--rho", type=float, help="(B-side) vigilance")
    parser.add_argument("--rho-a", type=float, help="A-side vigilance of fuzzy SMART")
    parser.add_argument("--alpha", type=float, help="choice parameter")
    parser.add_argument("--beta", type=float, help="learning rate")
    parser.add_argument("--clusterer", choices=[str(c) for c in ClustererKind])
    parser.add_argument("--epsilon", type=float, help="covariance floor exponent")
    parser.add_argument("--pbm-exponent", type=float, help="exponent of the I index")
    parser.add_argument("--sigma-data", choices=[str(m) for m in SigmaDataMode])
    parser.add_argument("--membership", choices=[str(m) for m in MembershipTest])
    parser.add_argument(
        "--indices", type=_kinds, help="comma separated indices, e.g. ch,db,conn"
    )
    parser.add_argument("--presentation", choices=[str(p) for p in Presentation])
    parser.add_argument(
        "--cluster-order", type=_ints, help="comma separated label permutation"
    )
    parser.add_argument("--seed", type=int, help="seed of the presentation order")


def _add_run_outputs(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--records", type=Path, help="step records CSV")
    parser.add_argument("--summary", type=Path, help="summary JSON")
    parser.add_argument("--gnuplot", type=Path, help="gnuplot companion script")
    parser.add_argument("--conn-matrix", type=Path, help="CONN matrix CSV")
    parser.add_argument("--network", type=Path, help="network JSON document")


def build_parser() -> argparse.ArgumentParser:
    """Command line of the experiment harness."""
    parser = argparse.ArgumentParser(
        prog="streaming-icvi",
        description="Stream data through online clusterers and incremental "
        "cluster validity indices.",
    )
    parser.add_argument(
        "--log-level", help="level of the package logger, e.g. debug or warning"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="stream one experiment")
    _add_experiment_arguments(run)
    _add_run_outputs(run)

    generate = commands.add_parser("generate", help="write the generated D4 set")
    generate.add_argument("output", type=Path, help="CSV file to write")
    generate.add_argument("--seed", type=int, default=DEFAULT_SEED)

    sweep = commands.add_parser(
        "sweep-conn", help="incremental vs batch connectivity over rho_a"
    )
    _add_experiment_arguments(sweep)
    sweep.add_argument("--rho-a-values", type=_floats, help="explicit rho_a grid")
    sweep.add_argument("--points", type=int, help="number of grid points")
    sweep.add_argument("--maximum", type=float, help="largest rho_a of the grid")
    sweep.add_argument("--spike-window", type=int)
    sweep.add_argument("--workers", type=int, dest="max_workers")
    sweep.add_argument("--records", type=Path, help="per-step series CSV")
    sweep.add_argument("--summary", type=Path, help="sweep report JSON")

    batch = commands.add_parser("batch-eval", help="batch indices of a partition")
    batch.add_argument("dataset", type=Path, help="labeled CSV data file")
    batch.add_argument(
        "--labels", type=Path, help="file with one label per row to score"
    )
    batch.add_argument(
        "--no-labels",
        dest="has_labels",
        action="store_false",
        help="the data file has no trailing label column",
    )
    batch.add_argument(
        "--textbook",
        action="store_true",
        help="textbook index forms instead of the incremental ones",
    )
    batch.add_argument("--db-p", type=float)
    batch.add_argument("--db-q", type=float)
    batch.add_argument("--epsilon", type=float)
    batch.add_argument("--pbm-exponent", type=float)
    batch.add_argument("--output", type=Path, help="CSV file for the values")
    return parser


def _experiment_config(args: argparse.Namespace) -> ExperimentConfig:
    values = {
        key: value
        for key in _CONFIG_FIELDS
        if (value := getattr(args, key, None)) is not None
    }
    if args.config is not None:
        return load_config(args.config, **values)
    return ExperimentConfig.model_validate(values)


def _run(args: argparse.Namespace) -> int:
    result = run_experiment(_experiment_config(args))
    sys.stdout.write(result.summary.model_dump_json(indent=2) + "\n")
    return EXIT_OK


def _generate(args: argparse.Namespace) -> int:
    dataset = generate_d4(args.seed)
    write_dataset(args.output, dataset)
    logger.info("wrote %d samples to %s", dataset.n_samples, args.output)
    return EXIT_OK


def _sweep(args: argparse.Namespace) -> int:
    args.indices = (IndexKind.CONN,)
    if args.rho_a is None and args.config is None:
        args.rho_a = args.rho
    config = _experiment_config(args)
    settings = {
        key: value
        for key in ("rho_a_values", "points", "maximum", "spike_window", "max_workers")
        if (value := getattr(args, key)) is not None
    }
    if settings:
        sweep = SweepSettings.model_validate({**config.sweep.model_dump(), **settings})
        config = config.model_copy(update={"sweep": sweep})
    report = compare_conn(config)
    if config.records is not None:
        report.series_frame().to_csv(
            config.records, index=False, na_rep="", float_format="%.12g"
        )
    if config.summary is not None:
        Path(config.summary).write_text(report.model_dump_json(indent=2), "utf-8")
    sys.stdout.write(report.frame().to_string(index=False) + "\n")
    return EXIT_OK


def _batch_eval(args: argparse.Namespace) -> int:
    dataset = ingest(args.dataset, has_labels=args.has_labels)
    truth = dataset.labels
    if args.labels is not None:
        labels = _read_labels(args.labels, dataset.n_samples)
    elif truth is not None:
        labels, truth = truth, None
    else:
        raise te.IcviConfigError("an unlabeled data file needs a label file")

    params = BatchCviParams.model_validate({
        "use_squared_norms": not args.textbook,
        **{
            key: value
            for key in ("db_p", "db_q", "epsilon", "pbm_exponent")
            if (value := getattr(args, key)) is not None
        },
    })
    partition = Partition(dataset.samples, labels)
    rows = [
        {
            "index": str(kind),
            "direction": str(kind.direction),
            "value": batch_cvi(partition, kind, params),
        }
        for kind in IndexKind
        if not kind.is_prototype_level
    ]
    if truth is not None:
        rows.append({
            "index": "ari",
            "direction": "max-better",
            "value": adjusted_rand_index(truth, labels),
        })
    frame = pd.DataFrame(rows)
    if args.output is not None:
        frame.to_csv(args.output, index=False, na_rep="", float_format="%.12g")
    sys.stdout.write(frame.to_string(index=False) + "\n")
    return EXIT_OK


def _read_labels(path: Path, n_samples: int) -> Any:
    """Read one integer label per row."""
    if not path.is_file():
        error_msg = f"label file not found: {path}"
        raise te.IcviFileNotFoundError(error_msg)
    frame = pd.read_csv(path, header=None, dtype=str, keep_default_na=False)
    values = pd.to_numeric(frame.iloc[:, -1], errors="coerce").to_numpy()
    if (bad := np.flatnonzero(~np.isfinite(values))).size:
        raise te.IcviDataError("label is not numeric", row=int(bad[0]))
    if values.size != n_samples:
        error_msg = f"{values.size} labels for {n_samples} samples"
        raise te.IcviDataError(error_msg)
    return values.astype(np.int64)


_COMMANDS = {
    "run": _run,
    "generate": _generate,
    "sweep-conn": _sweep,
    "batch-eval": _batch_eval,
}


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point of the `streaming-icvi` command.

    Returns:
        `0` on success, `2` for configuration errors, `3` for data errors
    """
    args = build_parser().parse_args(argv)
    if args.log_level:
        set_level(args.log_level)
    try:
        return _COMMANDS[args.command](args)
    except (te.IcviConfigError, ValidationError) as exc:
        logger.error("invalid configuration: %s", exc)  # noqa: TRY400
        return EXIT_CONFIG_ERROR
    except (te.IcviDataError, te.IcviFileNotFoundError) as exc:
        logger.error("invalid data: %s", exc)  # noqa: TRY400
        return EXIT_DATA_ERROR
