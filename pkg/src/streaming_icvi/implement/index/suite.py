from __future__ import annotations

from typing import TYPE_CHECKING, Any

from streaming_icvi import exception as te
from streaming_icvi.core.const import DEFAULT_EPSILON, DEFAULT_PBM_EXPONENT
from streaming_icvi.core.types import IndexKind
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
from streaming_icvi.implement.stats import PartitionStats
from streaming_icvi.log import get_logger

if TYPE_CHECKING:
    from collections.abc import Hashable, Iterable

    from streaming_icvi.core.types import IndexKindLiteral, Matrix
    from streaming_icvi.implement.index.base import BaseIndex

__all__ = ["IndexSuite", "create_index"]

logger = get_logger()

_INDEX_CLASSES: dict[IndexKind, type[BaseIndex]] = {
    IndexKind.CH: CalinskiHarabasz,
    IndexKind.I: IIndex,
    IndexKind.SIL: Silhouette,
    IndexKind.NI: NegentropyIncrement,
    IndexKind.RCIP: CrossInformationPotential,
    IndexKind.RH: CrossEntropy,
    IndexKind.XB: XieBeni,
    IndexKind.DB: DaviesBouldin,
    IndexKind.PS: PartitionSeparation,
}


def create_index(
    kind: IndexKind | IndexKindLiteral, *, pbm_exponent: float = DEFAULT_PBM_EXPONENT
) -> BaseIndex:
    """Create an empty incremental index.

    Args:
        kind: index identifier; the connectivity index is not centroid based
            and is served by [`ConnState`][streaming_icvi.implement.conn.ConnState].
        pbm_exponent: exponent of the I index.

    Returns:
        the index
    """
    kind = IndexKind(kind)
    if kind is IndexKind.I:
        return IIndex(pbm_exponent)
    try:
        index_class = _INDEX_CLASSES[kind]
    except KeyError as exc:
        error_msg = f"{kind} is not a centroid-level index"
        raise te.IcviConfigError(error_msg) from exc
    return index_class()


class IndexSuite:
    """Several incremental indices observing one stream.

    The shared statistics are updated once per sample, then every index
    refreshes itself from them in turn.

    Args:
        kinds: indices to maintain.
        epsilon: covariance floor exponent.
        pbm_exponent: exponent of the I index.
        sigma_data: fixed data covariance for the negentropy increment.
    """

    __slots__ = ("stats", "indices")

    def __init__(
        self,
        kinds: Iterable[IndexKind | IndexKindLiteral],
        *,
        epsilon: float = DEFAULT_EPSILON,
        pbm_exponent: float = DEFAULT_PBM_EXPONENT,
        sigma_data: Matrix | None = None,
    ) -> None:
        self.indices: dict[IndexKind, BaseIndex] = {}
        for kind in map(IndexKind, kinds):
            if kind not in self.indices:
                self.indices[kind] = create_index(kind, pbm_exponent=pbm_exponent)
        self.stats = PartitionStats(
            epsilon=epsilon,
            track_covariance=any(kind.needs_covariance for kind in self.indices),
            sigma_data=sigma_data,
        )

    @property
    def kinds(self) -> tuple[IndexKind, ...]:
        return tuple(self.indices)

    @property
    def k(self) -> int:
        return self.stats.k

    def observe(self, x: Any, label: Hashable) -> dict[IndexKind, float | None]:
        """Present one labeled sample to every index.

        Args:
            x: the sample.
            label: cluster id assigned by the clusterer.

        Returns:
            the new value of every index, `None` where undefined
        """
        step = self.stats.observe(x, label)
        values = {
            kind: index.update(self.stats, step)
            for kind, index in self.indices.items()
        }
        if step.created:
            logger.debug("k=%d after sample %d", self.stats.k, self.stats.n_samples)
        return values

    def values(self) -> dict[IndexKind, float | None]:
        """Latest value of every index."""
        return {kind: index.value for kind, index in self.indices.items()}
