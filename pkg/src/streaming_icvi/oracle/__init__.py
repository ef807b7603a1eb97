from __future__ import annotations

from streaming_icvi.oracle.ari import adjusted_rand_index, contingency_table
from streaming_icvi.oracle.conn import batch_conn_index, winner_cadj
from streaming_icvi.oracle.cvi import Partition, batch_cvi

__all__ = [
    "Partition",
    "batch_cvi",
    "batch_conn_index",
    "winner_cadj",
    "adjusted_rand_index",
    "contingency_table",
]
