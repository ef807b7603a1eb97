from __future__ import annotations

from typing import TYPE_CHECKING, Any

import numpy as np
from typing_extensions import Self, override

from streaming_icvi.implement.stats import utils as stats_utils

if TYPE_CHECKING:
    from streaming_icvi.core.types import Matrix, Vector

__all__ = ["ClusterStats"]


class ClusterStats:
    """Running statistics of one cluster.

    After any sequence of [`assign`][streaming_icvi.implement.stats.ClusterStats.assign]
    calls, `n`, `v` and `cp` equal the count, centroid and sum of squared
    distances to the centroid of every sample assigned so far.

    Args:
        n: sample count.
        v: centroid.
        cp: compactness, sum of squared distances to `v`.
        g: sum of deviations from `v`.
        sigma: covariance plus `delta * I`, or `None` when not tracked.
        delta: covariance floor, or `None` when covariance is not tracked.
    """

    __slots__ = ("n", "v", "cp", "g", "sigma", "delta")

    def __init__(
        self,
        n: int,
        v: Vector,
        cp: float,
        g: Vector,
        sigma: Matrix | None = None,
        delta: float | None = None,
    ) -> None:
        self.n = n
        self.v = v
        self.cp = cp
        self.g = g
        self.sigma = sigma
        self.delta = delta

    @classmethod
    def new(cls, x: Any, *, delta: float | None = None) -> Self:
        """Start a cluster from its first sample.

        Args:
            x: first sample.
            delta: covariance floor; the covariance is tracked only when given.

        Returns:
            statistics with `n=1`, `v=x`, `cp=0`, `g=0` and `sigma=delta*I`
        """
        sample = stats_utils.as_sample(x)
        sigma = None if delta is None else delta * np.eye(sample.size)
        return cls(1, sample.copy(), 0.0, np.zeros_like(sample), sigma, delta)

    @property
    def dimension(self) -> int:
        return self.v.size

    @property
    def tracks_covariance(self) -> bool:
        return self.sigma is not None

    def assign(self, x: Any) -> None:
        """Add a sample to the cluster.

        Args:
            x: the sample; its dimension must match the cluster's.
        """
        sample = stats_utils.as_sample(x, self.dimension)
        if self.sigma is not None:
            self.update_covariance(sample)
        n_old, v_old = self.n, self.v
        self.n = n_old + 1
        self.v = v_old + (sample - v_old) / self.n
        self.cp, self.g = stats_utils.compactness_step(
            self.cp, self.g, n_old, sample, v_old, self.v
        )

    def update_covariance(self, x: Any) -> None:
        """Fold `x` into the covariance.

        This is the covariance half of
        [`assign`][streaming_icvi.implement.stats.ClusterStats.assign]; it reads
        the count and centroid before they move, so it must run first.
        """
        if self.sigma is None or self.delta is None:
            return
        sample = stats_utils.as_sample(x, self.dimension)
        self.sigma = stats_utils.covariance_step(
            self.sigma, self.n + 1, sample, self.v, self.delta
        )

    def copy(self) -> ClusterStats:
        return ClusterStats(
            self.n,
            self.v.copy(),
            self.cp,
            self.g.copy(),
            None if self.sigma is None else self.sigma.copy(),
            self.delta,
        )

    @override
    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n}, v={self.v.tolist()}, cp={self.cp})"
