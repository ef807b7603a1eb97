from __future__ import annotations

import math
from typing import TYPE_CHECKING

import numpy as np
from typing_extensions import override

from streaming_icvi.core.const import DEFAULT_PBM_EXPONENT
from streaming_icvi.core.types import IndexKind
from streaming_icvi.implement.index.base import BaseIndex, off_diagonal, upper_pairs

if TYPE_CHECKING:
    from streaming_icvi.implement.stats import PartitionStats, StepUpdate

__all__ = [
    "CalinskiHarabasz",
    "IIndex",
    "XieBeni",
    "DaviesBouldin",
    "PartitionSeparation",
]


class CalinskiHarabasz(BaseIndex):
    """Incremental Calinski-Harabasz index (larger is better).

    `per_cluster` holds the separation terms `n_i * ||v_i - mu||^2`. The data
    mean moves with every sample, so all of them are refreshed each step.
    """

    kind_value = IndexKind.CH
    __slots__ = ()

    @override
    def _compute(self, stats: PartitionStats, step: StepUpdate) -> float | None:
        mu = stats.stream.mu
        if mu is None:
            return None
        diff = stats.centroids - mu
        self._per_cluster = stats.counts * np.einsum("ij,ij->i", diff, diff)

        k, n_samples = stats.k, stats.n_samples
        if k < 2 or n_samples <= k:  # noqa: PLR2004
            return None
        cp_sum = float(stats.compactness.sum())
        if cp_sum <= 0.0:
            return None
        return float(self._per_cluster.sum()) / cp_sum * (n_samples - k) / (k - 1)


class IIndex(BaseIndex):
    """Incremental I index (larger is better); `p=2` gives PBM.

    Squared norms replace the Euclidean norms of the batch definition so the
    compactness terms can be updated recursively.

    Args:
        p: exponent, at least 1.
    """

    kind_value = IndexKind.I
    __slots__ = ("p",)

    def __init__(self, p: float = DEFAULT_PBM_EXPONENT) -> None:
        super().__init__()
        self.p = p

    @override
    def _compute(self, stats: PartitionStats, step: StepUpdate) -> float | None:
        if stats.k < 2:  # noqa: PLR2004
            return None
        cp_sum = float(stats.compactness.sum())
        if cp_sum <= 0.0:
            return None
        separation = float(upper_pairs(stats.pairwise).max())
        return (separation / cp_sum * stats.stream.cp0 / stats.k) ** self.p


class XieBeni(BaseIndex):
    """Incremental Xie-Beni index (smaller is better)."""

    kind_value = IndexKind.XB
    __slots__ = ()

    @override
    def _compute(self, stats: PartitionStats, step: StepUpdate) -> float | None:
        if stats.k < 2:  # noqa: PLR2004
            return None
        separation = float(upper_pairs(stats.pairwise).min())
        if separation <= 0.0:
            return None
        return float(stats.compactness.sum()) / stats.n_samples / separation


class DaviesBouldin(BaseIndex):
    """Incremental Davies-Bouldin index (smaller is better).

    `per_cluster` holds each cluster's worst similarity ratio `R_i`.
    """

    kind_value = IndexKind.DB
    __slots__ = ()

    @override
    def _compute(self, stats: PartitionStats, step: StepUpdate) -> float | None:
        if stats.k < 2:  # noqa: PLR2004
            return None
        if float(upper_pairs(stats.pairwise).min()) <= 0.0:
            return None
        scatter = stats.compactness / stats.counts
        ratio = (scatter[:, None] + scatter[None, :]) / off_diagonal(
            stats.pairwise, math.inf
        )
        self._per_cluster = ratio.max(axis=1)
        return float(self._per_cluster.mean())


class PartitionSeparation(BaseIndex):
    """Partition separation index (larger is better).

    Only prototypes and counts enter the index, so it is recomputed from the
    current centroids at every step. `per_cluster` holds the `PS_i` terms.
    """

    kind_value = IndexKind.PS
    __slots__ = ()

    @override
    def _compute(self, stats: PartitionStats, step: StepUpdate) -> float | None:
        if stats.k < 2:  # noqa: PLR2004
            return None
        centroids = stats.centroids
        spread = centroids - centroids.mean(axis=0)
        beta_t = float(np.einsum("ij,ij->i", spread, spread).mean())
        if beta_t <= 0.0:
            return None
        counts = stats.counts
        nearest = off_diagonal(stats.pairwise, math.inf).min(axis=1)
        self._per_cluster = counts / counts.max() - np.exp(-nearest / beta_t)
        return float(self._per_cluster.sum())
