from __future__ import annotations

import math
from abc import abstractmethod
from typing import TYPE_CHECKING, ClassVar

import numpy as np
from typing_extensions import override

from streaming_icvi.interface.index import IndexProtocol

if TYPE_CHECKING:
    from streaming_icvi.core.types import IndexDirection, IndexKind, Matrix, Vector
    from streaming_icvi.implement.stats import PartitionStats, StepUpdate

__all__ = ["BaseIndex"]


class BaseIndex(IndexProtocol):
    """Common bookkeeping of the incremental indices.

    Subclasses implement `_compute`; non-finite results are reported as
    undefined.
    """

    kind_value: ClassVar[IndexKind]

    __slots__ = ("_value", "_k", "_per_cluster")

    def __init__(self) -> None:
        self._value: float | None = None
        self._k = 0
        self._per_cluster: Vector = np.zeros(0)

    @property
    @override
    def kind(self) -> IndexKind:
        return self.kind_value

    @property
    @override
    def direction(self) -> IndexDirection:
        return self.kind_value.direction

    @property
    @override
    def k(self) -> int:
        return self._k

    @property
    @override
    def value(self) -> float | None:
        return self._value

    @property
    @override
    def per_cluster(self) -> Vector:
        return self._per_cluster

    @override
    def update(self, stats: PartitionStats, step: StepUpdate) -> float | None:
        self._k = stats.k
        value = self._compute(stats, step)
        if value is not None and not math.isfinite(value):
            value = None
        self._value = value
        return value

    @abstractmethod
    def _compute(self, stats: PartitionStats, step: StepUpdate) -> float | None: ...

    @override
    def __repr__(self) -> str:
        return f"{type(self).__name__}(k={self._k}, value={self._value!r})"


def upper_pairs(pairwise: Matrix) -> Vector:
    """Entries above the diagonal, row by row."""
    rows, cols = np.triu_indices(pairwise.shape[0], k=1)
    return pairwise[rows, cols]


def off_diagonal(pairwise: Matrix, fill: float) -> Matrix:
    """Copy of `pairwise` with `fill` on the diagonal."""
    result = pairwise.copy()
    np.fill_diagonal(result, fill)
    return result
