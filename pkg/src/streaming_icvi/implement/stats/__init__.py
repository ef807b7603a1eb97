from __future__ import annotations

from streaming_icvi.implement.stats.cluster import ClusterStats
from streaming_icvi.implement.stats.partition import PartitionStats, StepUpdate
from streaming_icvi.implement.stats.stream import StreamStats
from streaming_icvi.implement.stats.utils import (
    compactness_step,
    covariance_floor,
    shift_compactness,
)

__all__ = [
    "ClusterStats",
    "StreamStats",
    "PartitionStats",
    "StepUpdate",
    "compactness_step",
    "shift_compactness",
    "covariance_floor",
]
