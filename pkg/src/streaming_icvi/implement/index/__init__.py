from __future__ import annotations

from streaming_icvi.implement.index.base import BaseIndex
from streaming_icvi.implement.index.centroid import (
    CalinskiHarabasz,
    DaviesBouldin,
    IIndex,
    PartitionSeparation,
    XieBeni,
)
from streaming_icvi.implement.index.gaussian import (
    CrossEntropy,
    CrossInformationPotential,
    NegentropyIncrement,
)
from streaming_icvi.implement.index.silhouette import Silhouette
from streaming_icvi.implement.index.suite import IndexSuite, create_index

__all__ = [
    "BaseIndex",
    "CalinskiHarabasz",
    "IIndex",
    "Silhouette",
    "NegentropyIncrement",
    "CrossInformationPotential",
    "CrossEntropy",
    "XieBeni",
    "DaviesBouldin",
    "PartitionSeparation",
    "IndexSuite",
    "create_index",
]
