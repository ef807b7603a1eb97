from __future__ import annotations

from collections.abc import Hashable
from typing import TYPE_CHECKING, Any, NamedTuple

import numpy as np

from streaming_icvi.core.const import DEFAULT_EPSILON
from streaming_icvi.implement.stats import utils as stats_utils
from streaming_icvi.implement.stats.cluster import ClusterStats
from streaming_icvi.implement.stats.stream import StreamStats
from streaming_icvi.log import get_logger

if TYPE_CHECKING:
    from streaming_icvi.core.types import Matrix, Vector

__all__ = ["PartitionStats", "StepUpdate"]

logger = get_logger()


class StepUpdate(NamedTuple):
    """What one observation changed in a
    [`PartitionStats`][streaming_icvi.implement.stats.PartitionStats]."""

    position: int
    """Position of the touched cluster."""
    created: bool
    """Whether the observation created the cluster."""
    n_old: int
    """Sample count of the touched cluster before the observation."""
    v_old: Vector
    """Centroid of the touched cluster before the observation; the sample itself
    on creation."""
    x: Vector
    """The observed sample."""


class PartitionStats:
    """Shared stream state every incremental index reads.

    Holds one [`ClusterStats`][streaming_icvi.implement.stats.ClusterStats] per
    label (in order of first appearance), the stream statistics, and the
    squared centroid distance matrix.

    Args:
        epsilon: covariance floor exponent; the floor is `10**(-epsilon/d)`.
        track_covariance: maintain per-cluster and data covariances.
        sigma_data: fixed data covariance to report instead of the running one.
    """

    __slots__ = (
        "epsilon",
        "track_covariance",
        "clusters",
        "labels",
        "positions",
        "stream",
        "pairwise",
        "delta",
        "_fixed_sigma_data",
    )

    def __init__(
        self,
        *,
        epsilon: float = DEFAULT_EPSILON,
        track_covariance: bool = False,
        sigma_data: Matrix | None = None,
    ) -> None:
        self.epsilon = epsilon
        self.track_covariance = track_covariance
        self.clusters: list[ClusterStats] = []
        self.labels: list[Hashable] = []
        self.positions: dict[Hashable, int] = {}
        self.stream = StreamStats()
        self.pairwise: Matrix = np.zeros((0, 0))
        self.delta: float | None = None
        self._fixed_sigma_data = sigma_data

    @property
    def k(self) -> int:
        """Number of clusters."""
        return len(self.clusters)

    @property
    def n_samples(self) -> int:
        """Number of samples observed."""
        return self.stream.n_samples

    @property
    def dimension(self) -> int | None:
        return None if self.stream.mu is None else self.stream.mu.size

    @property
    def counts(self) -> Vector:
        return np.array([cluster.n for cluster in self.clusters], dtype=np.float64)

    @property
    def centroids(self) -> Matrix:
        return np.stack([cluster.v for cluster in self.clusters])

    @property
    def compactness(self) -> Vector:
        return np.array([cluster.cp for cluster in self.clusters], dtype=np.float64)

    @property
    def sigma_data(self) -> Matrix | None:
        """Data covariance used by the negentropy increment."""
        if self._fixed_sigma_data is not None:
            return self._fixed_sigma_data
        return self.stream.sigma

    def observe(self, x: Any, label: Hashable) -> StepUpdate:
        """Update the stream and the cluster `label` with sample `x`.

        Args:
            x: the sample.
            label: cluster id from the clusterer; an unseen id creates a cluster.

        Returns:
            what changed
        """
        sample = stats_utils.as_sample(x, self.dimension)
        if self.delta is None and self.track_covariance:
            self.delta = stats_utils.covariance_floor(self.epsilon, sample.size)
            self.stream.delta = self.delta
        self.stream.observe(sample)

        position = self.positions.get(label)
        if position is None:
            position = self.k
            self.positions[label] = position
            self.labels.append(label)
            self.clusters.append(ClusterStats.new(sample, delta=self.delta))
            self.pairwise = np.pad(self.pairwise, ((0, 1), (0, 1)))
            self._refresh_pairwise(position)
            logger.debug("Created cluster %r at position %d", label, position)
            return StepUpdate(position, True, 0, sample, sample)

        cluster = self.clusters[position]
        n_old, v_old = cluster.n, cluster.v
        cluster.assign(sample)
        self._refresh_pairwise(position)
        return StepUpdate(position, False, n_old, v_old, sample)

    def _refresh_pairwise(self, position: int) -> None:
        centroids = self.centroids
        diff = centroids - centroids[position]
        distances = np.einsum("ij,ij->i", diff, diff)
        self.pairwise[position, :] = distances
        self.pairwise[:, position] = distances
