from __future__ import annotations

import math
from typing import TYPE_CHECKING, Any

import numpy as np
from scipy.spatial.distance import cdist
from scipy.stats import multivariate_normal

from streaming_icvi import exception as te
from streaming_icvi.core.types import IndexKind
from streaming_icvi.implement.stats import covariance_floor
from streaming_icvi.model import BatchCviParams
from streaming_icvi.oracle.conn import batch_conn_index

if TYPE_CHECKING:
    from collections.abc import Callable, Hashable, Sequence

    from streaming_icvi.core.types import IndexKindLiteral, Matrix, Vector

__all__ = ["Partition", "batch_cvi"]


class Partition:
    """Hard partition of a sample set.

    Args:
        samples: `N×d` samples.
        labels: cluster label of every sample.
    """

    __slots__ = ("samples", "labels", "codes", "clusters")

    def __init__(self, samples: Any, labels: Sequence[Hashable] | Any) -> None:
        self.samples: Matrix = np.atleast_2d(np.asarray(samples, dtype=np.float64))
        self.labels = np.asarray(labels)
        if self.samples.ndim != 2 or self.samples.shape[0] == 0:  # noqa: PLR2004
            raise te.IcviDimensionError("a partition needs a non-empty sample matrix")
        if self.labels.shape != (self.samples.shape[0],):
            error_msg = (
                f"{self.labels.size} labels for {self.samples.shape[0]} samples"
            )
            raise te.IcviValueError(error_msg)
        self.clusters, self.codes = np.unique(self.labels, return_inverse=True)

    @property
    def k(self) -> int:
        return len(self.clusters)

    @property
    def n_samples(self) -> int:
        return self.samples.shape[0]

    @property
    def dimension(self) -> int:
        return self.samples.shape[1]

    def members(self, cluster: int) -> Matrix:
        """Samples of the cluster at position `cluster`."""
        return self.samples[self.codes == cluster]

    @property
    def counts(self) -> Vector:
        return np.bincount(self.codes, minlength=self.k).astype(np.float64)

    @property
    def centroids(self) -> Matrix:
        return np.stack([self.members(i).mean(axis=0) for i in range(self.k)])

    @property
    def compactness(self) -> Vector:
        """Sum of squared distances to the centroid, per cluster."""
        centroids = self.centroids
        return np.array(
            [
                float(((self.members(i) - centroids[i]) ** 2).sum())
                for i in range(self.k)
            ]
        )

    def sizes(self) -> dict[Hashable, int]:
        return {
            cluster.item(): int(count)
            for cluster, count in zip(self.clusters, self.counts)
        }


def _pairwise(centroids: Matrix) -> Matrix:
    return cdist(centroids, centroids, "sqeuclidean")


def _off_diagonal(matrix: Matrix, fill: float) -> Matrix:
    result = matrix.copy()
    np.fill_diagonal(result, fill)
    return result


def _covariances(partition: Partition, epsilon: float) -> tuple[list[Matrix], Matrix]:
    delta = covariance_floor(epsilon, partition.dimension)
    floor = delta * np.eye(partition.dimension)

    def regularized(samples: Matrix) -> Matrix:
        if samples.shape[0] < 2:  # noqa: PLR2004
            return floor.copy()
        return np.atleast_2d(np.cov(samples, rowvar=False)) + floor

    clusters = [regularized(partition.members(i)) for i in range(partition.k)]
    return clusters, regularized(partition.samples)


def _ch(partition: Partition, params: BatchCviParams, **_: Any) -> float | None:
    k, n = partition.k, partition.n_samples
    if k < 2 or n <= k:  # noqa: PLR2004
        return None
    wgss = float(partition.compactness.sum())
    if wgss <= 0.0:
        return None
    mu = partition.samples.mean(axis=0)
    spread = ((partition.centroids - mu) ** 2).sum(axis=1)
    bgss = float((partition.counts * spread).sum())
    return (bgss / (k - 1)) / (wgss / (n - k))


def _i(partition: Partition, params: BatchCviParams, **_: Any) -> float | None:
    k = partition.k
    if k < 2:  # noqa: PLR2004
        return None
    centroids = partition.centroids
    mu = partition.samples.mean(axis=0)
    if params.use_squared_norms:
        e_1 = float(((partition.samples - mu) ** 2).sum())
        e_k = float(partition.compactness.sum())
        d_k = float(_pairwise(centroids).max())
    else:
        e_1 = float(np.linalg.norm(partition.samples - mu, axis=1).sum())
        e_k = sum(
            float(np.linalg.norm(partition.members(i) - centroids[i], axis=1).sum())
            for i in range(k)
        )
        d_k = float(cdist(centroids, centroids).max())
    if e_k <= 0.0:
        return None
    return (e_1 / e_k * d_k / k) ** params.pbm_exponent


def _xb(partition: Partition, params: BatchCviParams, **_: Any) -> float | None:
    if partition.k < 2:  # noqa: PLR2004
        return None
    separation = float(_off_diagonal(_pairwise(partition.centroids), math.inf).min())
    if separation <= 0.0:
        return None
    return float(partition.compactness.sum()) / partition.n_samples / separation


def _db(partition: Partition, params: BatchCviParams, **_: Any) -> float | None:
    k = partition.k
    if k < 2:  # noqa: PLR2004
        return None
    centroids = partition.centroids
    if params.use_squared_norms:
        scatter = partition.compactness / partition.counts
        separation = _pairwise(centroids)
    else:
        q = params.db_q
        scatter = np.array(
            [
                float(
                    np.mean(
                        np.linalg.norm(partition.members(i) - centroids[i], axis=1) ** q
                    )
                )
                ** (1.0 / q)
                for i in range(k)
            ]
        )
        separation = cdist(centroids, centroids, "minkowski", p=params.db_p)
    separation = _off_diagonal(separation, math.inf)
    if float(separation.min()) <= 0.0:
        return None
    ratio = (scatter[:, None] + scatter[None, :]) / separation
    return float(ratio.max(axis=1).mean())


def _ps(partition: Partition, params: BatchCviParams, **_: Any) -> float | None:
    if partition.k < 2:  # noqa: PLR2004
        return None
    centroids = partition.centroids
    beta_t = float(((centroids - centroids.mean(axis=0)) ** 2).sum(axis=1).mean())
    if beta_t <= 0.0:
        return None
    counts = partition.counts
    nearest = _off_diagonal(_pairwise(centroids), math.inf).min(axis=1)
    return float((counts / counts.max() - np.exp(-nearest / beta_t)).sum())


def _sil(partition: Partition, params: BatchCviParams, **_: Any) -> float | None:
    k = partition.k
    if k < 2:  # noqa: PLR2004
        return None
    if params.use_squared_norms:
        centroids = partition.centroids
        s = np.stack(
            [
                cdist(centroids, partition.members(j), "sqeuclidean").mean(axis=1)
                for j in range(k)
            ],
            axis=1,
        )
        a = np.diag(s).copy()
        b = _off_diagonal(s, math.inf).min(axis=1)
    else:
        distances = cdist(partition.samples, partition.samples)
        codes = partition.codes
        counts = np.bincount(codes, minlength=k)
        sums = np.stack(
            [distances[:, codes == j].sum(axis=1) for j in range(k)], axis=1
        )
        own = counts[codes]
        rows = np.arange(partition.n_samples)
        a = np.where(own > 1, sums[rows, codes] / np.maximum(own - 1, 1), 0.0)
        means = sums / counts[None, :]
        means[rows, codes] = math.inf
        b = means.min(axis=1)
    scale = np.maximum(a, b)
    safe = np.where(scale > 0.0, scale, 1.0)
    coefficients = np.where(scale > 0.0, (b - a) / safe, 0.0)
    return float(coefficients.mean())


def _ni(
    partition: Partition,
    params: BatchCviParams,
    *,
    sigma_data: Matrix | None = None,
    **_: Any,
) -> float | None:
    clusters, data = _covariances(partition, params.epsilon)
    if sigma_data is not None:
        data = sigma_data
    p = partition.counts / partition.n_samples
    half_logdets = []
    for sigma in [*clusters, data]:
        sign, logdet = np.linalg.slogdet(sigma)
        if sign <= 0:
            return None
        half_logdets.append(0.5 * float(logdet))
    *cluster_terms, data_term = half_logdets
    return float(np.sum(p * (np.array(cluster_terms) - np.log(p)))) - data_term


def _log_g(partition: Partition, params: BatchCviParams) -> Vector:
    clusters, _ = _covariances(partition, params.epsilon)
    centroids = partition.centroids
    rows, cols = np.triu_indices(partition.k, k=1)
    values = [
        multivariate_normal.logpdf(
            centroids[i] - centroids[j],
            mean=np.zeros(partition.dimension),
            cov=clusters[i] + clusters[j],
        )
        for i, j in zip(rows, cols)
    ]
    return np.asarray(values, dtype=np.float64)


def _rcip(partition: Partition, params: BatchCviParams, **_: Any) -> float | None:
    return float(np.exp(_log_g(partition, params)).sum())


def _rh(partition: Partition, params: BatchCviParams, **_: Any) -> float | None:
    return float(-_log_g(partition, params).sum())


def _conn(
    partition: Partition,
    params: BatchCviParams,
    *,
    connectivity: tuple[Any, Sequence[Hashable]] | None = None,
    **_: Any,
) -> float | None:
    if connectivity is None:
        error_msg = "the connectivity index needs a (cadj, proto_cluster) pair"
        raise te.IcviValueError(error_msg)
    cadj, proto_cluster = connectivity
    return batch_conn_index(
        cadj, proto_cluster, partition.sizes(), membership=params.membership
    )


_BATCH: dict[IndexKind, Callable[..., float | None]] = {
    IndexKind.CH: _ch,
    IndexKind.I: _i,
    IndexKind.SIL: _sil,
    IndexKind.NI: _ni,
    IndexKind.RCIP: _rcip,
    IndexKind.RH: _rh,
    IndexKind.XB: _xb,
    IndexKind.DB: _db,
    IndexKind.PS: _ps,
    IndexKind.CONN: _conn,
}


def batch_cvi(
    partition: Partition,
    kind: IndexKind | IndexKindLiteral,
    params: BatchCviParams | None = None,
    *,
    connectivity: tuple[Any, Sequence[Hashable]] | None = None,
    sigma_data: Matrix | None = None,
) -> float | None:
    """Compute a cluster validity index from scratch.

    Args:
        partition: the partition to score.
        kind: index identifier.
        params: index parameters and the choice between the forms the
            incremental indices maintain and the textbook forms.
        connectivity: `(cadj, proto_cluster)`, required by the connectivity
            index; cluster sizes come from `partition`.
        sigma_data: fixed data covariance for the negentropy increment.

    Returns:
        the value, or `None` when undefined
    """
    if params is None:
        params = BatchCviParams()
    value = _BATCH[IndexKind(kind)](
        partition, params, connectivity=connectivity, sigma_data=sigma_data
    )
    if value is None or not math.isfinite(value):
        return None
    return value
