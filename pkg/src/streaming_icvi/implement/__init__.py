from __future__ import annotations

from streaming_icvi.implement.art import FuzzyArt, FuzzySmart, complement_code
from streaming_icvi.implement.conn import ConnState
from streaming_icvi.implement.index import IndexSuite, create_index
from streaming_icvi.implement.stats import ClusterStats, PartitionStats, StreamStats

__all__ = [
    "ClusterStats",
    "StreamStats",
    "PartitionStats",
    "IndexSuite",
    "create_index",
    "ConnState",
    "FuzzyArt",
    "FuzzySmart",
    "complement_code",
]
