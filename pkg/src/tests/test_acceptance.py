from __future__ import annotations

import os

import numpy as np
import pytest

from streaming_icvi.core.types import IndexKind
from streaming_icvi.harness import compare_conn, run_experiment
from streaming_icvi.implement import IndexSuite
from streaming_icvi.model import ExperimentConfig, SweepSettings
from streaming_icvi.oracle import Partition, batch_cvi

from tests.base import CENTROID_KINDS, R15_ENV, approx, planted_stream

pytestmark = pytest.mark.acceptance

D4_GRID = np.round(np.arange(0.5, 0.905, 0.01), 2)


def _config(**kwargs) -> ExperimentConfig:
    return ExperimentConfig.model_validate(kwargs)


def _r15_config(**kwargs) -> ExperimentConfig:
    return _config(dataset=os.environ[R15_ENV], **kwargs)


def _mean_tail(records, kind: IndexKind, fraction: float = 0.25) -> float:
    tail = records[-int(len(records) * fraction) :]
    values = [r.values[kind] for r in tail if r.values[kind] is not None]
    return float(np.mean(values))


@pytest.fixture(scope="module")
def perfect_rho(d4) -> float | None:
    for rho in D4_GRID:
        config = _config(generator="d4", rho=float(rho), indices=[])
        summary = run_experiment(config, d4).summary
        if summary.final_k == 4 and summary.ari == 1.0:  # noqa: PLR2004
            return float(rho)
    return None


@pytest.mark.parametrize("seed", range(50))
def test_random_streams_match_batch(seed):
    rng = np.random.default_rng(1000 + seed)
    dimension = int(rng.choice([2, 5]))
    k = int(rng.integers(2, 9))
    n_samples = int(rng.integers(60, 160))
    samples, labels = planted_stream(1000 + seed, n_samples, dimension, k)

    suite = IndexSuite(CENTROID_KINDS)
    for step, (x, label) in enumerate(zip(samples, labels)):
        values = suite.observe(x, label)
        partition = Partition(samples[: step + 1], labels[: step + 1])
        for kind in CENTROID_KINDS:
            expected = batch_cvi(partition, kind)
            assert values[kind] == approx(expected), f"{kind} at step {step}"


def test_d4_perfect_partition(perfect_rho):
    assert perfect_rho is not None


def test_d4_over_partition_lowers_conn(d4, perfect_rho):
    if (rho := perfect_rho) is None:
        pytest.fail("no vigilance partitions D4 perfectly")
    perfect = run_experiment(
        _config(generator="d4", rho=rho, rho_a=0.9, indices=["conn"]), d4
    )
    assert perfect.summary.ari == 1.0

    for candidate in D4_GRID[D4_GRID > rho]:
        config = _config(
            generator="d4",
            rho=float(candidate),
            rho_a=max(float(candidate), 0.9),
            indices=["conn"],
        )
        split = run_experiment(config, d4)
        if split.summary.final_k >= 6 and split.summary.ari >= 0.85:  # noqa: PLR2004
            break
    else:
        pytest.skip("no vigilance over-partitions D4 with ARI >= 0.85")

    assert _mean_tail(split.records, IndexKind.CONN) < _mean_tail(
        perfect.records, IndexKind.CONN
    )


def test_r15_high_quality(r15):
    good = 0
    for seed in range(10):
        config = _r15_config(rho=0.88, indices=[], seed=seed)
        summary = run_experiment(config, r15).summary
        if summary.final_k == 15 and summary.ari >= 0.95:  # noqa: PLR2004
            good += 1
    assert good >= 8


def test_r15_under_partition(r15):
    config = _r15_config(rho=0.61, rho_a=0.9, indices=["db", "conn"])
    result = run_experiment(config, r15)
    assert result.summary.ari <= 0.4

    truth = r15.labels[[record.sample for record in result.records]]
    segments = []
    for start in np.flatnonzero(np.diff(truth)) + 1:
        record = result.records[start]
        if record.cluster_created or record.values[IndexKind.DB] is None:
            continue
        blocks = np.flatnonzero(np.diff(truth[start:]))
        end = start + (blocks[0] if blocks.size else len(truth) - 1 - start)
        segments.append((end - start, start, end))
    assert segments, "no ground-truth cluster merged into an existing one"

    _, start, end = max(segments)
    db = [result.records[step].values[IndexKind.DB] for step in (start, end)]
    conn = [result.records[step].values[IndexKind.CONN] for step in (start, end)]
    assert db[1] > db[0]
    assert conn[1] >= conn[0]


@pytest.mark.timeout(600)
def test_r15_conn_sweep(r15):
    config = _r15_config(
        rho=0.88,
        rho_a=0.88,
        indices=["conn"],
        sweep=SweepSettings(points=8, maximum=0.96),
    )
    report = compare_conn(config, r15)
    pearson = [point.comparison.pearson for point in report.points]
    correlated = sum(r is not None and r >= 0.8 for r in pearson)  # noqa: PLR2004
    assert correlated >= 0.75 * len(pearson)
    spikes = [
        point.comparison.spike_fraction
        for point in report.points
        if point.comparison.spike_fraction is not None
    ]
    assert np.mean(spikes) >= 0.6  # noqa: PLR2004
