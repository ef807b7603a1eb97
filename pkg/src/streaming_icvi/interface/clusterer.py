# pyright: reportReturnType=false
from __future__ import annotations

from typing import TYPE_CHECKING, Any, Protocol, runtime_checkable

if TYPE_CHECKING:
    from collections.abc import Mapping

    from streaming_icvi.core.types import ArtMode


__all__ = ["ClustererProtocol"]


@runtime_checkable
class ClustererProtocol(Protocol):
    """Online clusterer that labels one sample per presentation."""

    @property
    def mode(self) -> ArtMode:
        """Training or evaluation mode."""

    @property
    def n_clusters(self) -> int:
        """Number of clusters (categories) created so far."""

    def label(self, x: Any) -> int:
        """Present `x` and return its cluster id.

        Args:
            x: normalized sample with components in [0, 1].

        Returns:
            cluster id, counted from 0 in order of creation
        """

    def model_dump(self) -> Mapping[str, Any]:
        """Return a JSON-compatible description of the network state."""
