from __future__ import annotations

from typing import TYPE_CHECKING, Any

import numpy as np

from streaming_icvi.implement.stats import utils as stats_utils

if TYPE_CHECKING:
    from streaming_icvi.core.types import Matrix, Vector

__all__ = ["StreamStats"]


class StreamStats:
    """Running statistics of every sample seen on a stream.

    Args:
        delta: covariance floor; the data covariance is tracked only when given.
    """

    __slots__ = ("n_samples", "mu", "cp0", "g0", "sigma", "delta")

    def __init__(self, delta: float | None = None) -> None:
        self.delta = delta
        self.n_samples = 0
        self.mu: Vector | None = None
        self.cp0 = 0.0
        self.g0: Vector | None = None
        self.sigma: Matrix | None = None

    def observe(self, x: Any) -> None:
        """Fold one sample into the data mean, compactness and covariance."""
        if self.mu is None or self.g0 is None:
            sample = stats_utils.as_sample(x)
            self.n_samples = 1
            self.mu = sample.copy()
            self.cp0 = 0.0
            self.g0 = np.zeros_like(sample)
            if self.delta is not None:
                self.sigma = self.delta * np.eye(sample.size)
            return

        sample = stats_utils.as_sample(x, self.mu.size)
        n_old, mu_old = self.n_samples, self.mu
        self.n_samples = n_old + 1
        if self.sigma is not None and self.delta is not None:
            self.sigma = stats_utils.covariance_step(
                self.sigma, self.n_samples, sample, mu_old, self.delta
            )
        self.mu = mu_old + (sample - mu_old) / self.n_samples
        self.cp0, self.g0 = stats_utils.compactness_step(
            self.cp0, self.g0, n_old, sample, mu_old, self.mu
        )
