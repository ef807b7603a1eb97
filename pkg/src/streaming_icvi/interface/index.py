# pyright: reportReturnType=false
from __future__ import annotations

from typing import TYPE_CHECKING, Protocol, runtime_checkable

if TYPE_CHECKING:
    from streaming_icvi.core.types import IndexDirection, IndexKind, Vector
    from streaming_icvi.implement.stats import PartitionStats, StepUpdate


__all__ = ["IndexProtocol"]


@runtime_checkable
class IndexProtocol(Protocol):
    """Incremental cluster validity index.

    An index reads the shared
    [`PartitionStats`][streaming_icvi.implement.stats.PartitionStats] after the
    per-step statistics update and refreshes its own value.
    """

    @property
    def kind(self) -> IndexKind:
        """Index identifier."""

    @property
    def direction(self) -> IndexDirection:
        """Whether larger or smaller values mark a better partition."""

    @property
    def k(self) -> int:
        """Number of clusters seen at the last update."""

    @property
    def value(self) -> float | None:
        """Latest value, or `None` while the index is undefined."""

    @property
    def per_cluster(self) -> Vector:
        """Index-specific per-cluster terms of the latest value."""

    def update(self, stats: PartitionStats, step: StepUpdate) -> float | None:
        """Refresh the index after `stats` has absorbed `step`.

        Args:
            stats: shared stream state, already updated with `step`.
            step: what the last observation changed.

        Returns:
            the new value, or `None` when undefined
        """
