from __future__ import annotations

from typing import TYPE_CHECKING, Any

import numpy as np

from streaming_icvi import exception as te
from streaming_icvi.core.types import MembershipTest

if TYPE_CHECKING:
    from collections.abc import Hashable, Mapping, Sequence

    from numpy.typing import NDArray

    from streaming_icvi.core.types import MembershipTestLiteral

__all__ = ["batch_conn_index", "winner_cadj"]


def winner_cadj(first: Any, second: Any, n_prototypes: int) -> NDArray[np.int64]:
    """Cumulative adjacency matrix of (first, second) winner pairs.

    Args:
        first: first winning prototype of every sample.
        second: second winning prototype of every sample; negative entries
            (no second prototype) are skipped.
        n_prototypes: number of prototypes.

    Returns:
        `P×P` counts
    """
    first = np.asarray(first, dtype=np.intp)
    second = np.asarray(second, dtype=np.intp)
    if first.shape != second.shape:
        raise te.IcviValueError("first and second winners differ in length")
    cadj = np.zeros((n_prototypes, n_prototypes), dtype=np.int64)
    valid = second >= 0
    np.add.at(cadj, (first[valid], second[valid]), 1)
    return cadj


def batch_conn_index(
    cadj: Any,
    proto_cluster: Sequence[Hashable],
    sizes: Mapping[Hashable, int],
    *,
    membership: MembershipTest | MembershipTestLiteral = MembershipTest.CONN,
) -> float:
    """Connectivity index computed from scratch.

    Args:
        cadj: cumulative adjacency matrix.
        proto_cluster: cluster of every prototype.
        sizes: number of samples of every cluster; a multi-prototype
            cluster without samples has no intra connectivity.
        membership: border test, `CONN(i, j) > 0` or `CADJ(i, j) > 0`.

    Returns:
        `Intra_Conn * (1 - Inter_Conn)`; `0` for a single cluster
    """
    cadj = np.asarray(cadj, dtype=np.int64)
    if cadj.shape != (len(proto_cluster), len(proto_cluster)):
        error_msg = (
            f"cadj has shape {cadj.shape} for {len(proto_cluster)} prototypes"
        )
        raise te.IcviDimensionError(error_msg)
    clusters = list(dict.fromkeys(proto_cluster))
    if len(clusters) < 2:  # noqa: PLR2004
        return 0.0

    conn = cadj + cadj.T
    test = cadj if MembershipTest(membership) is MembershipTest.CADJ else conn
    members = {
        cluster: [i for i, owner in enumerate(proto_cluster) if owner == cluster]
        for cluster in clusters
    }

    intra = []
    for cluster in clusters:
        own = members[cluster]
        if len(own) == 1:
            intra.append(1.0)
        elif (size := sizes.get(cluster, 0)) > 0:
            intra.append(cadj[np.ix_(own, own)].sum() / size)
        else:
            intra.append(0.0)

    inter = []
    for cluster in clusters:
        own = members[cluster]
        best = 0.0
        for other in clusters:
            if other == cluster:
                continue
            border = [i for i in own if test[i, members[other]].sum() > 0]
            if not border:
                continue
            between = conn[np.ix_(border, members[other])].sum()
            best = max(best, between / conn[border].sum())
        inter.append(best)

    return float(np.mean(intra) * (1.0 - np.mean(inter)))
