from __future__ import annotations

from typing import TYPE_CHECKING, Any

import numpy as np
from scipy.special import comb

from streaming_icvi import exception as te

if TYPE_CHECKING:
    from numpy.typing import NDArray

__all__ = ["adjusted_rand_index", "contingency_table"]


def contingency_table(labels_a: Any, labels_b: Any) -> NDArray[np.int64]:
    """Counts of samples per (label in `labels_a`, label in `labels_b`) pair."""
    a = np.asarray(labels_a)
    b = np.asarray(labels_b)
    if a.ndim != 1 or a.shape != b.shape:
        error_msg = f"labelings differ in shape: {a.shape} and {b.shape}"
        raise te.IcviValueError(error_msg)
    _, rows = np.unique(a, return_inverse=True)
    _, cols = np.unique(b, return_inverse=True)
    table = np.zeros((rows.max() + 1, cols.max() + 1), dtype=np.int64)
    np.add.at(table, (rows, cols), 1)
    return table


def adjusted_rand_index(labels_a: Any, labels_b: Any) -> float:
    """Pair-counting adjusted Rand index of two labelings.

    Args:
        labels_a: first labeling.
        labels_b: second labeling of the same samples.

    Returns:
        1 for identical partitions up to relabeling, about 0 for chance
        agreement
    """
    if len(labels_a) < 2:  # noqa: PLR2004
        raise te.IcviValueError("the adjusted Rand index needs at least 2 samples")
    table = contingency_table(labels_a, labels_b)
    n = int(table.sum())

    pairs_table = float(comb(table, 2).sum())
    pairs_a = float(comb(table.sum(axis=1), 2).sum())
    pairs_b = float(comb(table.sum(axis=0), 2).sum())
    expected = pairs_a * pairs_b / float(comb(n, 2))
    maximum = 0.5 * (pairs_a + pairs_b)
    if maximum == expected:
        return 1.0
    return (pairs_table - expected) / (maximum - expected)
