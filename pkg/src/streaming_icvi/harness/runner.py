from __future__ import annotations

from pathlib import Path
from typing import TYPE_CHECKING, NamedTuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict

from streaming_icvi import exception as te
from streaming_icvi.core.context import context, tag
from streaming_icvi.core.types import IndexKind, SigmaDataMode
from streaming_icvi.harness.data import generate_d4, ingest, presentation_order
from streaming_icvi.implement import (
    ConnState,
    FuzzyArt,
    FuzzySmart,
    IndexSuite,
    complement_code,
)
from streaming_icvi.implement.stats import covariance_floor
from streaming_icvi.log import get_logger
from streaming_icvi.oracle import adjusted_rand_index

if TYPE_CHECKING:
    from collections.abc import Iterator, Sequence
    from os import PathLike

    from streaming_icvi.core.types import Matrix
    from streaming_icvi.harness.data import Dataset
    from streaming_icvi.model import ExperimentConfig

__all__ = [
    "StepRecord",
    "RunSummary",
    "RunResult",
    "Experiment",
    "load_dataset",
    "run_experiment",
    "records_frame",
    "write_records",
    "write_gnuplot",
]

logger = get_logger("harness")

RECORD_COLUMNS = ("step", "sample", "cluster", "k")


class StepRecord(NamedTuple):
    """State of the stream right after one presentation."""

    step: int
    sample: int
    """Row of the presented sample in the data set."""
    cluster: int
    k: int
    values: dict[IndexKind, float | None]
    """Value of every active index, `None` while undefined."""
    prototype: int | None = None
    cluster_created: bool = False


class RunSummary(BaseModel):
    """Outcome of one streaming run."""

    model_config = ConfigDict(frozen=True)

    dataset: str
    n_samples: int
    dimension: int
    clusterer: str
    rho: float
    rho_a: float | None
    seed: int
    presentation: str
    final_k: int
    n_prototypes: int | None
    ari: float | None
    cluster_creation_steps: list[int]
    final_values: dict[str, float | None]
    directions: dict[str, str]


class RunResult(NamedTuple):
    records: list[StepRecord]
    summary: RunSummary
    clusterer: FuzzyArt | FuzzySmart
    conn: ConnState | None


def load_dataset(config: ExperimentConfig) -> Dataset:
    """Data set named by the configuration."""
    if config.generator is not None:
        return generate_d4(config.seed)
    if config.dataset is None:  # pragma: no cover
        raise te.IcviConfigError("no data set configured")
    return ingest(config.dataset, has_labels=config.has_labels)


def _batch_sigma_data(samples: Matrix, epsilon: float) -> Matrix:
    dimension = samples.shape[1]
    sigma = np.atleast_2d(np.cov(samples, rowvar=False))
    return sigma + covariance_floor(epsilon, dimension) * np.eye(dimension)


class Experiment:
    """One pass of a data set through a clusterer and the active indices.

    Args:
        config: the experiment.
        dataset: data set to stream; loaded from `config` when omitted.
    """

    __slots__ = ("config", "dataset", "order", "clusterer", "suite", "conn")

    def __init__(
        self, config: ExperimentConfig, dataset: Dataset | None = None
    ) -> None:
        self.config = config
        self.dataset = load_dataset(config) if dataset is None else dataset
        self.order = presentation_order(
            self.dataset.labels,
            self.dataset.n_samples,
            config.presentation,
            seed=config.seed,
            cluster_order=config.cluster_order,
        )
        self.clusterer: FuzzyArt | FuzzySmart = (
            FuzzySmart.from_settings(config.art, config.art_a)
            if config.smart
            else FuzzyArt.from_settings(config.art)
        )
        sigma_data = (
            _batch_sigma_data(self.dataset.samples, config.epsilon)
            if config.sigma_data is SigmaDataMode.BATCH
            else None
        )
        self.suite = IndexSuite(
            [kind for kind in config.indices if not kind.is_prototype_level],
            epsilon=config.epsilon,
            pbm_exponent=config.pbm_exponent,
            sigma_data=sigma_data,
        )
        self.conn = (
            ConnState(membership=config.membership)
            if IndexKind.CONN in config.indices
            else None
        )

    @property
    def kinds(self) -> tuple[IndexKind, ...]:
        """Active indices in configuration order."""
        return tuple(self.config.indices)

    def steps(self) -> Iterator[StepRecord]:
        """Present every sample once, in presentation order."""
        samples = self.dataset.samples
        for step, row in enumerate(self.order.tolist()):
            x = samples[row]
            prototype: int | None = None
            if isinstance(self.clusterer, FuzzySmart):
                assignment = self.clusterer.present(x)
                cluster, created = assignment.cluster, assignment.cluster_created
                prototype = assignment.prototype
                if self.conn is not None:
                    self.conn.observe_pair(
                        assignment.prototype, assignment.second_prototype, cluster
                    )
            else:
                cluster, created = self.clusterer.present(complement_code(x))

            values = self.suite.observe(x, cluster)
            if self.conn is not None:
                values[IndexKind.CONN] = self.conn.value()
            k = self.clusterer.n_clusters
            if created:
                logger.debug("cluster %d created", cluster, extra={"step": step})
            yield StepRecord(
                step=step,
                sample=row,
                cluster=cluster,
                k=k,
                values={
                    kind: None if k < 2 else values[kind]  # noqa: PLR2004
                    for kind in self.kinds
                },
                prototype=prototype,
                cluster_created=created,
            )

    def summarize(self, records: Sequence[StepRecord]) -> RunSummary:
        """Summary of a finished run."""
        config, dataset = self.config, self.dataset
        ari: float | None = None
        if dataset.labels is not None and len(records) >= 2:  # noqa: PLR2004
            truth = dataset.labels[self.order]
            ari = adjusted_rand_index(truth, [record.cluster for record in records])
        final = records[-1].values if records else {}
        return RunSummary(
            dataset=str(config.dataset) if config.dataset else str(config.generator),
            n_samples=dataset.n_samples,
            dimension=dataset.dimension,
            clusterer=type(self.clusterer).__name__,
            rho=config.rho,
            rho_a=config.rho_a if config.smart else None,
            seed=config.seed,
            presentation=str(config.presentation),
            final_k=self.clusterer.n_clusters,
            n_prototypes=(
                self.clusterer.n_prototypes
                if isinstance(self.clusterer, FuzzySmart)
                else None
            ),
            ari=ari,
            cluster_creation_steps=[r.step for r in records if r.cluster_created],
            final_values={str(kind): final.get(kind) for kind in self.kinds},
            directions={str(kind): str(kind.direction) for kind in self.kinds},
        )


def records_frame(
    records: Sequence[StepRecord], kinds: Sequence[IndexKind]
) -> pd.DataFrame:
    """Step records as a frame, one column per index."""
    rows = [
        (
            record.step,
            record.sample,
            record.cluster,
            record.k,
            *(record.values[kind] for kind in kinds),
        )
        for record in records
    ]
    columns = [*RECORD_COLUMNS, *(str(kind) for kind in kinds)]
    frame = pd.DataFrame(rows, columns=columns)
    for kind in kinds:
        frame[str(kind)] = frame[str(kind)].astype(np.float64)
    return frame


def write_records(
    path: str | PathLike[str], records: Sequence[StepRecord], kinds: Sequence[IndexKind]
) -> None:
    """Write step records as CSV; undefined values become empty cells."""
    records_frame(records, kinds).to_csv(
        path, index=False, na_rep="", float_format="%.12g"
    )


def write_gnuplot(
    path: str | PathLike[str],
    records_path: str | PathLike[str],
    kinds: Sequence[IndexKind],
) -> None:
    """Write a gnuplot script plotting every index column with the k trace."""
    records_path = Path(records_path)
    lines = [
        "set datafile separator ','",
        "set key autotitle columnheader outside",
        "set xlabel 'sample'",
        "set y2label 'k'",
        "set ytics nomirror",
        "set y2tics",
        f"data = '{records_path.as_posix()}'",
    ]
    for number, kind in enumerate(kinds, start=len(RECORD_COLUMNS) + 1):
        lines.extend(
            [
                f"set title '{kind} ({kind.direction})'",
                f"plot data using 1:{number} with lines, "
                "data using 1:4 axes x1y2 with steps lc rgb 'red'",
                "pause -1",
            ]
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


@context("run")
def run_experiment(
    config: ExperimentConfig, dataset: Dataset | None = None
) -> RunResult:
    """Stream a data set through the clusterer and every active index.

    Output files named by the configuration are written when the run ends.

    Args:
        config: the experiment.
        dataset: data set overriding the one named by `config`.

    Returns:
        step records, summary and the trained clusterer
    """
    experiment = Experiment(config, dataset)
    logger.info(
        "streaming %d samples through %s (rho=%s, rho_a=%s)",
        experiment.dataset.n_samples,
        type(experiment.clusterer).__name__,
        config.rho,
        config.rho_a,
    )
    with tag(f"seed={config.seed}"):
        records = list(experiment.steps())
        summary = experiment.summarize(records)
        logger.info("final k=%d, ari=%s", summary.final_k, summary.ari)

    kinds = experiment.kinds
    if config.records is not None:
        write_records(config.records, records, kinds)
    if config.summary is not None:
        Path(config.summary).write_text(
            summary.model_dump_json(indent=2), encoding="utf-8"
        )
    if config.gnuplot is not None and config.records is not None:
        write_gnuplot(config.gnuplot, config.records, kinds)
    if config.conn_matrix is not None and experiment.conn is not None:
        experiment.conn.to_frame().to_csv(config.conn_matrix)
    if config.network is not None:
        Path(config.network).write_text(
            experiment.clusterer.document().model_dump_json(indent=2),
            encoding="utf-8",
        )
    return RunResult(records, summary, experiment.clusterer, experiment.conn)

