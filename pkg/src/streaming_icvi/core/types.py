from __future__ import annotations

import sys
from typing import Literal, NamedTuple

import numpy as np
from numpy.typing import NDArray
from typing_extensions import TypeAlias, override

if sys.version_info >= (3, 11):  # pragma: no cover
    from enum import StrEnum
else:  # pragma: no cover
    from enum import Enum

    class StrEnum(str, Enum):
        @override
        def __str__(self) -> str:
            return self.value


__all__ = [
    "Vector",
    "Matrix",
    "IndexKind",
    "IndexDirection",
    "ArtMode",
    "Presentation",
    "SigmaDataMode",
    "ClustererKind",
    "MembershipTest",
    "Assignment",
    "SmartAssignment",
    "IndexKindLiteral",
    "ArtModeLiteral",
    "PresentationLiteral",
    "SigmaDataModeLiteral",
    "ClustererKindLiteral",
    "MembershipTestLiteral",
]

Vector: TypeAlias = "NDArray[np.float64]"
Matrix: TypeAlias = "NDArray[np.float64]"


class IndexDirection(StrEnum):
    """Which end of an index scale marks the better partition."""

    MAX = "max-better"
    MIN = "min-better"


class IndexKind(StrEnum):
    """Cluster validity indices."""

    CH = "ch"
    I = "i"  # noqa: E741
    SIL = "sil"
    NI = "ni"
    RCIP = "rcip"
    RH = "rh"
    XB = "xb"
    DB = "db"
    PS = "ps"
    CONN = "conn"

    @property
    def direction(self) -> IndexDirection:
        """Orientation of the index."""
        if self in _MIN_BETTER:
            return IndexDirection.MIN
        return IndexDirection.MAX

    @property
    def needs_covariance(self) -> bool:
        """Whether the index consumes per-cluster covariance matrices."""
        return self in _COVARIANCE_KINDS

    @property
    def is_prototype_level(self) -> bool:
        """Whether the index needs a two-level prototype hierarchy."""
        return self is IndexKind.CONN


_MIN_BETTER = frozenset({IndexKind.DB, IndexKind.XB, IndexKind.NI, IndexKind.RCIP})
_COVARIANCE_KINDS = frozenset({IndexKind.NI, IndexKind.RCIP, IndexKind.RH})

IndexKindLiteral = Literal[
    "ch", "i", "sil", "ni", "rcip", "rh", "xb", "db", "ps", "conn"
]


class ArtMode(StrEnum):
    """Fuzzy ART operating modes."""

    TRAINING = "training"
    EVALUATION = "evaluation"


ArtModeLiteral = Literal["training", "evaluation"]


class Presentation(StrEnum):
    """Order in which samples are presented to the clusterer."""

    CLUSTER_BY_CLUSTER = "cluster-by-cluster"
    AS_IS = "as-is"
    SHUFFLED = "shuffled"


PresentationLiteral = Literal["cluster-by-cluster", "as-is", "shuffled"]


class SigmaDataMode(StrEnum):
    """How the data covariance of the negentropy increment is obtained."""

    INCREMENTAL = "incremental"
    BATCH = "batch"


SigmaDataModeLiteral = Literal["incremental", "batch"]


class ClustererKind(StrEnum):
    """Online clusterer driving the indices."""

    AUTO = "auto"
    FUZZY_ART = "fuzzy-art"
    SMART = "smart"


ClustererKindLiteral = Literal["auto", "fuzzy-art", "smart"]


class MembershipTest(StrEnum):
    """Connectivity test selecting the prototypes of an inter-cluster border."""

    CONN = "conn"
    CADJ = "cadj"


MembershipTestLiteral = Literal["conn", "cadj"]


class Assignment(NamedTuple):
    """Result of one fuzzy ART presentation."""

    category: int
    created: bool


class SmartAssignment(NamedTuple):
    """Result of one fuzzy SMART presentation."""

    prototype: int
    cluster: int
    second_prototype: int | None
    prototype_created: bool
    cluster_created: bool
