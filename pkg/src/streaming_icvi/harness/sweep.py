from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from functools import partial
from typing import TYPE_CHECKING, Any

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict
from scipy.stats import pearsonr

from streaming_icvi import exception as te
from streaming_icvi.core.const import SWEEP_MIN_DEFINED_STEPS
from streaming_icvi.core.context import context, tag
from streaming_icvi.core.types import IndexKind, MembershipTest
from streaming_icvi.harness.runner import Experiment, load_dataset
from streaming_icvi.implement import FuzzySmart
from streaming_icvi.log import get_logger
from streaming_icvi.oracle import batch_conn_index, winner_cadj

if TYPE_CHECKING:
    from collections.abc import Sequence

    from streaming_icvi.core.types import MembershipTestLiteral
    from streaming_icvi.harness.data import Dataset
    from streaming_icvi.model import ExperimentConfig

__all__ = [
    "SeriesComparison",
    "SweepPoint",
    "SweepReport",
    "compare_series",
    "batch_shadow",
    "compare_conn",
]

logger = get_logger("harness")


class SeriesComparison(BaseModel):
    """Agreement between an incremental series and its batch counterpart."""

    model_config = ConfigDict(frozen=True)

    n_paired: int
    """Steps where both series are defined."""
    pearson: float | None
    mse: float | None
    spike_fraction: float | None
    """Share of top-decile absolute errors that follow a cluster creation
    within the spike window."""


class SweepPoint(BaseModel):
    """One A-side vigilance of the sweep."""

    model_config = ConfigDict(frozen=True)

    rho_a: float
    final_k: int
    n_prototypes: int
    ari: float | None
    comparison: SeriesComparison
    creations: list[int]
    incremental: list[float | None]
    batch: list[float | None]


class SweepReport(BaseModel):
    """Incremental against batch connectivity index over an A-side sweep."""

    model_config = ConfigDict(frozen=True)

    rho: float
    spike_window: int
    points: list[SweepPoint]

    def frame(self) -> pd.DataFrame:
        """One row per grid point."""
        return pd.DataFrame(
            [
                {
                    "rho_a": point.rho_a,
                    "final_k": point.final_k,
                    "n_prototypes": point.n_prototypes,
                    "ari": point.ari,
                    **point.comparison.model_dump(),
                }
                for point in self.points
            ]
        )

    def series_frame(self) -> pd.DataFrame:
        """Per-step series of every grid point, in long form."""
        frames = []
        for point in self.points:
            incremental = np.array(point.incremental, dtype=np.float64)
            batch = np.array(point.batch, dtype=np.float64)
            steps = np.arange(len(incremental))
            frames.append(
                pd.DataFrame(
                    {
                        "rho_a": point.rho_a,
                        "step": steps,
                        "incremental": incremental,
                        "batch": batch,
                        "error": batch - incremental,
                        "created": np.isin(steps, point.creations),
                    }
                )
            )
        return pd.concat(frames, ignore_index=True)


def compare_series(
    incremental: Sequence[float | None],
    batch: Sequence[float | None],
    creations: Sequence[int] = (),
    *,
    spike_window: int = 0,
) -> SeriesComparison:
    """Compare two step series over the steps where both are defined.

    Args:
        incremental: incremental value per step.
        batch: batch value per step.
        creations: steps at which a cluster was created.
        spike_window: steps after a creation still attributed to it.

    Returns:
        Pearson correlation, mean squared error and spike localisation;
        `None` where not computable
    """
    if len(incremental) != len(batch):
        raise te.IcviValueError("series differ in length")
    inc = np.array(incremental, dtype=np.float64)
    bat = np.array(batch, dtype=np.float64)
    paired = np.flatnonzero(np.isfinite(inc) & np.isfinite(bat))
    if paired.size == 0:
        return SeriesComparison(n_paired=0, pearson=None, mse=None, spike_fraction=None)

    error = bat[paired] - inc[paired]
    mse = float(np.mean(error**2))

    pearson: float | None = None
    if paired.size < SWEEP_MIN_DEFINED_STEPS:
        logger.warning("correlation undefined: %d paired steps", paired.size)
    elif np.ptp(inc[paired]) == 0.0 or np.ptp(bat[paired]) == 0.0:
        if np.array_equal(inc[paired], bat[paired]):
            pearson = 1.0
        else:
            logger.warning("correlation undefined: constant series")
    else:
        pearson = float(pearsonr(inc[paired], bat[paired])[0])

    spike_fraction: float | None = None
    magnitude = np.abs(error)
    if magnitude.max() > 0.0:
        threshold = np.quantile(magnitude, 0.9)
        spikes = paired[(magnitude >= threshold) & (magnitude > 0.0)]
        created = np.asarray(creations, dtype=np.intp)
        if created.size:
            lag = spikes[:, None] - created[None, :]
            near = ((lag >= 0) & (lag <= spike_window)).any(axis=1)
        else:
            near = np.zeros(spikes.size, dtype=bool)
        spike_fraction = float(near.mean())

    return SeriesComparison(
        n_paired=int(paired.size),
        pearson=pearson,
        mse=mse,
        spike_fraction=spike_fraction,
    )


def batch_shadow(
    network: FuzzySmart,
    seen: Any,
    *,
    membership: MembershipTest | MembershipTestLiteral = MembershipTest.CONN,
) -> float | None:
    """Connectivity index from winners recomputed over every sample seen.

    The network is evaluated without learning; the first winners also decide
    the cluster sizes.

    Args:
        network: the trained network.
        seen: samples presented so far, one per row.
        membership: border test of the index.

    Returns:
        the batch value, `None` while fewer than two clusters exist
    """
    if network.n_clusters < 2:  # noqa: PLR2004
        return None
    first, second = network.winners_batch(seen)
    cadj = winner_cadj(first, second, network.n_prototypes)
    clusters = np.bincount(network.cluster_of(first), minlength=network.n_clusters)
    sizes = {cluster: int(size) for cluster, size in enumerate(clusters)}
    return batch_conn_index(cadj, network.map_ab, sizes, membership=membership)


@context("sweep")
def _sweep_point(
    config: ExperimentConfig, dataset: Dataset, rho_a: float
) -> SweepPoint:
    with tag(f"rho_a={rho_a:.4f}"):
        return _run_point(config, dataset, rho_a)


def _run_point(
    config: ExperimentConfig, dataset: Dataset, rho_a: float
) -> SweepPoint:
    point_config = config.model_copy(
        update={"rho_a": rho_a, "indices": (IndexKind.CONN,)}
    )
    experiment = Experiment(point_config, dataset)
    network = experiment.clusterer
    if not isinstance(network, FuzzySmart):  # pragma: no cover
        raise te.IcviConfigError("the connectivity sweep needs fuzzy SMART")

    samples = dataset.samples[experiment.order]
    records = []
    batch: list[float | None] = []
    for record in experiment.steps():
        records.append(record)
        batch.append(
            batch_shadow(
                network, samples[: record.step + 1], membership=config.membership
            )
        )
    incremental = [record.values[IndexKind.CONN] for record in records]
    creations = [record.step for record in records if record.cluster_created]
    summary = experiment.summarize(records)
    comparison = compare_series(
        incremental, batch, creations, spike_window=config.sweep.spike_window
    )
    logger.info(
        "rho_a=%.4f: k=%d, prototypes=%d, r=%s, mse=%s",
        rho_a,
        summary.final_k,
        network.n_prototypes,
        comparison.pearson,
        comparison.mse,
    )
    return SweepPoint(
        rho_a=rho_a,
        final_k=summary.final_k,
        n_prototypes=network.n_prototypes,
        ari=summary.ari,
        comparison=comparison,
        creations=creations,
        incremental=incremental,
        batch=batch,
    )


@context("sweep")
def compare_conn(
    config: ExperimentConfig, dataset: Dataset | None = None
) -> SweepReport:
    """Run fuzzy SMART over a grid of A-side vigilance values and compare the
    incremental connectivity index with its batch shadow after every step.

    Grid points run in parallel, each with its own network and state; the
    report lists them in grid order.

    Args:
        config: the experiment; its `sweep` settings give the grid.
        dataset: data set overriding the one named by `config`.

    Returns:
        the sweep report
    """
    grid = config.sweep.grid(config.rho)
    if dataset is None:
        dataset = load_dataset(config)
    logger.info("sweeping %d values of rho_a from %.4f", len(grid), grid[0])
    with ThreadPoolExecutor(max_workers=config.sweep.max_workers) as pool:
        points = list(pool.map(partial(_sweep_point, config, dataset), grid))
    return SweepReport(
        rho=config.rho, spike_window=config.sweep.spike_window, points=points
    )
