from __future__ import annotations

import copy
from typing import TYPE_CHECKING

import numpy as np
import pandas as pd

from streaming_icvi import exception as te
from streaming_icvi.core.types import IndexDirection, IndexKind, MembershipTest
from streaming_icvi.log import get_logger

if TYPE_CHECKING:
    from numpy.typing import NDArray

    from streaming_icvi.core.types import MembershipTestLiteral

__all__ = ["ConnState"]

logger = get_logger()


def _grow(array: NDArray[np.int64], rows: int, cols: int) -> NDArray[np.int64]:
    return np.pad(array, ((0, rows), (0, cols)))


class ConnState:
    """Incremental connectivity index over a prototype hierarchy.

    Every presentation adds one count to the cumulative adjacency matrix
    `cadj` at (first winner, second winner). The per-cluster and per-pair
    sums the index is built from are cached and updated for the touched
    cell only; they are rebuilt from `cadj` when a prototype changes cluster.
    A cluster left without prototypes is dropped and its sample count goes
    to the cluster that received its last prototype.

    While the cluster of a sample owns a single prototype, no adjacency can
    be recorded; the sample is tallied on that prototype instead and the
    tally moves into `cadj[solo, new]` once the cluster gets its second
    prototype.

    Args:
        membership: test selecting the border prototypes of a cluster pair;
            `conn` uses `CONN(i, j) > 0`, `cadj` the original `CADJ(i, j) > 0`.
    """

    kind = IndexKind.CONN
    direction = IndexDirection.MAX

    def __init__(
        self,
        *,
        membership: MembershipTest | MembershipTestLiteral = MembershipTest.CONN,
    ) -> None:
        self.membership = MembershipTest(membership)
        self.cadj: NDArray[np.int64] = np.zeros((0, 0), dtype=np.int64)
        self.proto_cluster: list[int] = []
        self.cluster_ids: list[int] = []
        self.instance_count: dict[int, int] = {}
        self.sizes: NDArray[np.int64] = np.zeros(0, dtype=np.int64)
        self._positions: dict[int, int] = {}
        self._members: list[list[int]] = []
        self._intra_num = np.zeros(0, dtype=np.int64)
        self._rowsum = np.zeros(0, dtype=np.int64)
        self._conn_to_cluster = np.zeros((0, 0), dtype=np.int64)
        self._cadj_to_cluster = np.zeros((0, 0), dtype=np.int64)
        self._num = np.zeros((0, 0), dtype=np.int64)
        self._den = np.zeros((0, 0), dtype=np.int64)

    @property
    def n_prototypes(self) -> int:
        return len(self.proto_cluster)

    @property
    def k(self) -> int:
        return len(self.cluster_ids)

    @property
    def n_samples(self) -> int:
        return int(self.sizes.sum())

    @property
    def conn(self) -> NDArray[np.int64]:
        """Symmetric connectivity strength `cadj + cadj.T`."""
        return self.cadj + self.cadj.T

    @property
    def pending(self) -> int:
        """Samples tallied on solo prototypes and not yet in `cadj`."""
        return sum(self.instance_count.values())

    def cluster_of(self, prototype: int) -> int:
        """Cluster id of a prototype."""
        self._check_prototype(prototype)
        return self.proto_cluster[prototype]

    def observe_pair(
        self, first_winner: int, second_winner: int | None, cluster: int
    ) -> None:
        """Record one presentation.

        Args:
            first_winner: best prototype; the next unused id registers a new
                prototype in `cluster`, a known one owned by another cluster
                moves into `cluster`.
            second_winner: best prototype other than `first_winner`, or `None`
                while a single prototype exists.
            cluster: cluster of the sample.
        """
        created = first_winner == self.n_prototypes
        if created:
            self._add_prototype(cluster)
        else:
            self._check_prototype(first_winner)
            if self.proto_cluster[first_winner] != cluster:
                self._move_prototype(first_winner, cluster)
        if second_winner is not None:
            self._check_prototype(second_winner)
            if second_winner == first_winner:
                error_msg = f"first and second winner are both prototype {first_winner}"
                raise te.IcviValueError(error_msg)

        position = self._positions[cluster]
        self.sizes[position] += 1
        members = self._members[position]

        if len(members) == 1:
            self.instance_count[first_winner] = (
                self.instance_count.get(first_winner, 0) + 1
            )
            return
        if second_winner is None:
            error_msg = "a second winner is required once two prototypes exist"
            raise te.IcviValueError(error_msg)

        self._increment(first_winner, second_winner, 1)
        if created and len(members) == 2:  # noqa: PLR2004
            solo = members[0]
            tally = self.instance_count.pop(solo, 0)
            if tally:
                self._increment(solo, first_winner, tally)
                logger.debug(
                    "moved %d solo samples of prototype %d into cadj", tally, solo
                )

    def value(self) -> float:
        """Current connectivity index in [0, 1]; `0` for a single cluster."""
        k = self.k
        if k < 2:  # noqa: PLR2004
            return 0.0
        intra = self.intra_conn()
        den = self._den.astype(np.float64)
        with np.errstate(divide="ignore", invalid="ignore"):
            inter_pairs = np.where(den > 0, self._num / den, 0.0)
        np.fill_diagonal(inter_pairs, -np.inf)
        inter = inter_pairs.max(axis=1)
        return float(intra.mean() * (1.0 - inter.mean()))

    def intra_conn(self) -> NDArray[np.float64]:
        """Per-cluster intra connectivity, in cluster order."""
        intra = np.zeros(self.k)
        for position, members in enumerate(self._members):
            if len(members) == 1:
                intra[position] = 1.0
            elif (size := self.sizes[position]) > 0:
                intra[position] = self._intra_num[position] / size
        return intra

    def copy(self) -> ConnState:
        """Independent snapshot of the state."""
        return copy.deepcopy(self)

    def to_frame(self) -> pd.DataFrame:
        """CONN matrix with prototype ids as index and columns, plus the
        cluster of every prototype in a trailing `cluster` column."""
        ids = pd.Index(range(self.n_prototypes), name="prototype")
        frame = pd.DataFrame(self.conn, index=ids, columns=list(ids))
        frame["cluster"] = self.proto_cluster
        return frame

    def _check_prototype(self, prototype: int) -> None:
        if not 0 <= prototype < self.n_prototypes:
            error_msg = f"unknown prototype {prototype}"
            raise te.IcviKeyError(error_msg)

    def _add_prototype(self, cluster: int) -> None:
        prototype = self.n_prototypes
        if cluster not in self._positions:
            self._positions[cluster] = self.k
            self.cluster_ids.append(cluster)
            self._members.append([])
            self.sizes = np.append(self.sizes, 0)
            self._intra_num = np.append(self._intra_num, 0)
            self._conn_to_cluster = _grow(self._conn_to_cluster, 0, 1)
            self._cadj_to_cluster = _grow(self._cadj_to_cluster, 0, 1)
            self._num = _grow(self._num, 1, 1)
            self._den = _grow(self._den, 1, 1)
        self.proto_cluster.append(cluster)
        self._members[self._positions[cluster]].append(prototype)
        self.cadj = _grow(self.cadj, 1, 1)
        self._rowsum = np.append(self._rowsum, 0)
        self._conn_to_cluster = _grow(self._conn_to_cluster, 1, 0)
        self._cadj_to_cluster = _grow(self._cadj_to_cluster, 1, 0)
        logger.debug("prototype %d created in cluster %d", prototype, cluster)

    def _move_prototype(self, prototype: int, cluster: int) -> None:
        old = self.proto_cluster[prototype]
        logger.debug(
            "prototype %d moved from cluster %d to %d", prototype, old, cluster
        )
        self._members[self._positions[old]].remove(prototype)
        if cluster not in self._positions:
            self._positions[cluster] = self.k
            self.cluster_ids.append(cluster)
            self._members.append([])
            self.sizes = np.append(self.sizes, 0)
        target = self._positions[cluster]
        self._members[target].append(prototype)
        self._members[target].sort()
        self.proto_cluster[prototype] = cluster

        source = self._positions[old]
        if not self._members[source]:
            # the last prototype carries the samples of its cluster along
            self.sizes[target] += self.sizes[source]
            del self.cluster_ids[source]
            del self._members[source]
            self.sizes = np.delete(self.sizes, source)
            self._positions = {c: i for i, c in enumerate(self.cluster_ids)}
            logger.debug("cluster %d dropped without prototypes", old)
        self._rebuild()

    def _border(self, prototype: int) -> NDArray[np.bool_]:
        if self.membership is MembershipTest.CADJ:
            return self._cadj_to_cluster[prototype] > 0
        return self._conn_to_cluster[prototype] > 0

    def _increment(self, first: int, second: int, amount: int) -> None:
        l_first = self._positions[self.proto_cluster[first]]
        l_second = self._positions[self.proto_cluster[second]]
        before = {
            prototype: (
                self._border(prototype),
                self._rowsum[prototype],
                self._conn_to_cluster[prototype].copy(),
            )
            for prototype in (first, second)
        }

        self.cadj[first, second] += amount
        if l_first == l_second:
            self._intra_num[l_first] += amount
        self._rowsum[first] += amount
        self._rowsum[second] += amount
        self._conn_to_cluster[first, l_second] += amount
        self._conn_to_cluster[second, l_first] += amount
        self._cadj_to_cluster[first, l_second] += amount

        # only border prototypes count, in the numerator as in the denominator
        for prototype, (border, rowsum, links) in before.items():
            row = self._positions[self.proto_cluster[prototype]]
            self._num[row] -= np.where(border, links, 0)
            self._den[row] -= np.where(border, rowsum, 0)
            border = self._border(prototype)
            self._num[row] += np.where(border, self._conn_to_cluster[prototype], 0)
            self._den[row] += np.where(border, self._rowsum[prototype], 0)

    def _rebuild(self) -> None:
        k = self.k
        conn = self.conn
        labels = [self._positions[cluster] for cluster in self.proto_cluster]
        onehot = np.zeros((self.n_prototypes, k), dtype=np.int64)
        onehot[np.arange(self.n_prototypes), labels] = 1

        self._rowsum = conn.sum(axis=1)
        self._conn_to_cluster = conn @ onehot
        self._cadj_to_cluster = self.cadj @ onehot
        self._intra_num = np.array(
            [self.cadj[np.ix_(m, m)].sum() for m in self._members], dtype=np.int64
        )
        border = (
            self._cadj_to_cluster
            if self.membership is MembershipTest.CADJ
            else self._conn_to_cluster
        ) > 0
        self._num = onehot.T @ (border * self._conn_to_cluster)
        self._den = onehot.T @ (border * self._rowsum[:, None])
