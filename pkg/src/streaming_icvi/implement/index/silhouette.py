from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np
from typing_extensions import override

from streaming_icvi.core.types import IndexKind
from streaming_icvi.implement.index.base import BaseIndex, off_diagonal
from streaming_icvi.implement.stats import compactness_step, shift_compactness

if TYPE_CHECKING:
    from streaming_icvi.core.types import Matrix, Vector
    from streaming_icvi.implement.stats import PartitionStats, StepUpdate

__all__ = ["Silhouette"]


class Silhouette(BaseIndex):
    """Incremental centroid silhouette (larger is better).

    Keeps the k×k matrix `s`, where `s[i, j]` is the mean squared distance of
    the samples of cluster `j` to the centroid of cluster `i`. Each cluster
    also keeps `sum ||x||^2` and `sum x` of its samples, which are its
    compactness terms about the origin; every entry of `s` is obtained by
    moving that reference to a centroid.

    `per_cluster` holds the silhouette coefficients `sc_i`.
    """

    kind_value = IndexKind.SIL
    __slots__ = ("_s", "_cp_sil", "_g_sil")

    def __init__(self) -> None:
        super().__init__()
        self._s: Matrix = np.zeros((0, 0))
        self._cp_sil: list[float] = []
        self._g_sil: list[Vector] = []

    @property
    def matrix(self) -> Matrix:
        """The dissimilarity matrix `s`."""
        return self._s

    @override
    def _compute(self, stats: PartitionStats, step: StepUpdate) -> float | None:
        if step.created:
            self._append(stats, step)
        else:
            self._assign(stats, step)
        np.maximum(self._s, 0.0, out=self._s)

        if stats.k < 2:  # noqa: PLR2004
            self._per_cluster = np.zeros(stats.k)
            return None
        a = np.diag(self._s).copy()
        b = off_diagonal(self._s, np.inf).min(axis=1)
        scale = np.maximum(a, b)
        safe = np.where(scale > 0.0, scale, 1.0)
        self._per_cluster = np.where(scale > 0.0, (b - a) / safe, 0.0)
        return float(self._per_cluster.mean())

    def _append(self, stats: PartitionStats, step: StepUpdate) -> None:
        x, new = step.x, step.position
        origin = np.zeros_like(x)
        norm = float(x @ x)
        self._s = np.pad(self._s, ((0, 1), (0, 1)))
        for i, cluster in enumerate(stats.clusters[:new]):
            self._s[i, new], _ = shift_compactness(norm, x, 1, origin, cluster.v)
            cp, _ = shift_compactness(
                self._cp_sil[i], self._g_sil[i], cluster.n, origin, x
            )
            self._s[new, i] = cp / cluster.n
        self._s[new, new] = 0.0
        self._cp_sil.append(norm)
        self._g_sil.append(x.copy())

    def _assign(self, stats: PartitionStats, step: StepUpdate) -> None:
        x, target = step.x, step.position
        origin = np.zeros_like(x)
        n_old = step.n_old
        n_new = n_old + 1
        cp_j, g_j = self._cp_sil[target], self._g_sil[target]
        v_target = stats.clusters[target].v

        for i, cluster in enumerate(stats.clusters):
            if i == target:
                cp, _ = compactness_step(cp_j, g_j, n_old, x, origin, v_target)
                self._s[i, i] = cp / n_new
                continue
            cp, _ = compactness_step(cp_j, g_j, n_old, x, origin, cluster.v)
            self._s[i, target] = cp / n_new
            cp, _ = shift_compactness(
                self._cp_sil[i], self._g_sil[i], cluster.n, origin, v_target
            )
            self._s[target, i] = cp / cluster.n

        self._cp_sil[target] = cp_j + float(x @ x)
        self._g_sil[target] = g_j + x
