from __future__ import annotations

from streaming_icvi.interface.clusterer import ClustererProtocol
from streaming_icvi.interface.index import IndexProtocol

__all__ = ["IndexProtocol", "ClustererProtocol"]
