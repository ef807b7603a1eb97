from __future__ import annotations

import math
from typing import TYPE_CHECKING

import numpy as np
from scipy.stats import multivariate_normal
from typing_extensions import override

from streaming_icvi import exception as te
from streaming_icvi.core.types import IndexKind
from streaming_icvi.implement.index.base import BaseIndex, upper_pairs

if TYPE_CHECKING:
    from streaming_icvi.core.types import Matrix, Vector
    from streaming_icvi.implement.stats import ClusterStats, PartitionStats, StepUpdate

__all__ = ["NegentropyIncrement", "CrossInformationPotential", "CrossEntropy"]


def _covariance(cluster: ClusterStats) -> Matrix:
    if cluster.sigma is None:
        error_msg = "covariance is not tracked; build the stats with track_covariance"
        raise te.IcviStateError(error_msg)
    return cluster.sigma


def _half_logdet(sigma: Matrix) -> float | None:
    sign, logdet = np.linalg.slogdet(sigma)
    if sign <= 0 or not math.isfinite(logdet):
        return None
    return 0.5 * float(logdet)


class NegentropyIncrement(BaseIndex):
    """Incremental negentropy increment (smaller is better).

    The half log-determinants of the cluster covariances are cached and only
    the touched cluster's entry is recomputed; they are exposed as
    `per_cluster`. The data covariance changes every step and is refreshed
    each time.
    """

    kind_value = IndexKind.NI
    __slots__ = ()

    @override
    def _compute(self, stats: PartitionStats, step: StepUpdate) -> float | None:
        half_logdet = _half_logdet(_covariance(stats.clusters[step.position]))
        if step.created:
            self._per_cluster = np.append(self._per_cluster, np.nan)
        self._per_cluster[step.position] = (
            np.nan if half_logdet is None else half_logdet
        )

        sigma_data = stats.sigma_data
        if sigma_data is None:
            raise te.IcviStateError("data covariance is not tracked")
        data_term = _half_logdet(sigma_data)
        if data_term is None or not np.all(np.isfinite(self._per_cluster)):
            return None

        p = stats.counts / stats.n_samples
        return float(np.sum(p * (self._per_cluster - np.log(p)))) - data_term


class _GaussianPairIndex(BaseIndex):
    """Shared pair cache of the cross information potential indices.

    `log_g[i, j]` is the log density at `v_i - v_j` of a zero-mean Gaussian
    with covariance `sigma_i + sigma_j`. Only the row and column of the
    touched cluster are recomputed on each step.
    """

    __slots__ = ("_log_g",)

    def __init__(self) -> None:
        super().__init__()
        self._log_g: Matrix = np.zeros((0, 0))

    @property
    def log_g(self) -> Matrix:
        return self._log_g

    @override
    def _compute(self, stats: PartitionStats, step: StepUpdate) -> float | None:
        if step.created:
            self._log_g = np.pad(self._log_g, ((0, 1), (0, 1)))
        self._refresh(stats, step.position)
        return self._combine(upper_pairs(self._log_g))

    def _refresh(self, stats: PartitionStats, position: int) -> None:
        touched = stats.clusters[position]
        sigma = _covariance(touched)
        for i, cluster in enumerate(stats.clusters):
            if i == position:
                continue
            log_g = _log_density(touched.v - cluster.v, sigma + _covariance(cluster))
            self._log_g[i, position] = log_g
            self._log_g[position, i] = log_g

    def _combine(self, log_g: Vector) -> float:
        raise NotImplementedError


def _log_density(diff: Vector, cov: Matrix) -> float:
    try:
        density = multivariate_normal.logpdf(diff, mean=np.zeros_like(diff), cov=cov)
    except (np.linalg.LinAlgError, ValueError) as exc:
        error_msg = "covariance sum is singular despite the diagonal floor"
        raise te.IcviNumericalError(error_msg) from exc
    return float(density)


class CrossInformationPotential(_GaussianPairIndex):
    """Representative cross information potential (smaller is better).

    One Gaussian per cluster; the value is the sum of the pair densities and
    is `0` for a single cluster.
    """

    kind_value = IndexKind.RCIP
    __slots__ = ()

    @override
    def _combine(self, log_g: Vector) -> float:
        return float(np.exp(log_g).sum())


class CrossEntropy(_GaussianPairIndex):
    """Negative log of the representative cross information potential, summed
    per pair (larger is better)."""

    kind_value = IndexKind.RH
    __slots__ = ()

    @override
    def _combine(self, log_g: Vector) -> float:
        return float(-log_g.sum())
