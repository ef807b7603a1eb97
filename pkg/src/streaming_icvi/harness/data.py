from __future__ import annotations

import re
import warnings
from pathlib import Path
from typing import TYPE_CHECKING, Any, NamedTuple

import numpy as np
import pandas as pd
from scipy.stats import truncnorm

from streaming_icvi import exception as te
from streaming_icvi.core.const import (
    D4_CENTERS,
    D4_CLUSTER_SIZE,
    D4_SCALE,
    D4_TRUNCATION,
    DEFAULT_SEED,
)
from streaming_icvi.core.context import context
from streaming_icvi.core.types import Presentation
from streaming_icvi.log import get_logger

if TYPE_CHECKING:
    from collections.abc import Sequence
    from os import PathLike

    from numpy.typing import NDArray

    from streaming_icvi.core.types import Matrix, PresentationLiteral

__all__ = [
    "Dataset",
    "ingest",
    "generate_d4",
    "normalize",
    "presentation_order",
    "write_dataset",
]

logger = get_logger("harness")

_TOKENIZE_LINE = re.compile(r"line (\d+)")


class Dataset(NamedTuple):
    """Normalized samples with optional ground-truth labels."""

    samples: Matrix
    """`N×d` samples with every feature min-max scaled to [0, 1]."""
    labels: NDArray[np.int64] | None
    """Integer label of every sample, when the source has them."""

    @property
    def n_samples(self) -> int:
        return self.samples.shape[0]

    @property
    def dimension(self) -> int:
        return self.samples.shape[1]


def normalize(features: Any) -> Matrix:
    """Scale every feature to [0, 1] over the whole data set.

    Args:
        features: `N×d` raw features with `N >= 2`.

    Returns:
        the scaled features
    """
    raw = np.asarray(features, dtype=np.float64)
    if raw.ndim != 2 or raw.shape[0] < 2:  # noqa: PLR2004
        raise te.IcviDataError("normalization needs at least two rows")
    minimum = raw.min(axis=0)
    span = raw.max(axis=0) - minimum
    if (constant := np.flatnonzero(span <= 0.0)).size:
        error_msg = "feature is constant and cannot be normalized"
        raise te.IcviDataError(error_msg, column=int(constant[0]))
    return np.clip((raw - minimum) / span, 0.0, 1.0)


@context("ingest")
def ingest(path: str | PathLike[str], *, has_labels: bool = True) -> Dataset:
    """Read and normalize a CSV data file.

    The file holds one sample per row: numeric features, followed by an
    integer label when `has_labels` is set. A leading header row is detected,
    skipped and reported with an `IcviHeaderWarning`.

    Args:
        path: CSV file.
        has_labels: whether the last column holds labels.

    Returns:
        normalized samples and their labels
    """
    file = Path(path)
    if not file.is_file():
        error_msg = f"data file not found: {file}"
        raise te.IcviFileNotFoundError(error_msg)
    try:
        frame = pd.read_csv(
            file, header=None, dtype=str, keep_default_na=False, skipinitialspace=True
        )
    except pd.errors.EmptyDataError as exc:
        error_msg = f"data file is empty: {file}"
        raise te.IcviDataError(error_msg) from exc
    except pd.errors.ParserError as exc:
        match = _TOKENIZE_LINE.search(str(exc))
        row = int(match.group(1)) - 1 if match else None
        error_msg = "rows have different numbers of fields"
        raise te.IcviDataError(error_msg, row=row) from exc

    if frame.isna().to_numpy().any():
        row, column = np.argwhere(frame.isna().to_numpy())[0]
        error_msg = "row has fewer fields than the first row"
        raise te.IcviDataError(error_msg, row=int(row), column=int(column))

    numeric = frame.apply(pd.to_numeric, errors="coerce")
    invalid = numeric.isna().to_numpy()
    offset = 0
    if invalid[0].any() and not invalid[1:].any() and len(frame) > 1:
        warnings.warn(
            f"skipping header row of {file.name}: {', '.join(frame.iloc[0])}",
            te.IcviHeaderWarning,
            stacklevel=2,
        )
        numeric, invalid, offset = numeric.iloc[1:], invalid[1:], 1
    if invalid.any():
        row, column = np.argwhere(invalid)[0]
        error_msg = f"non-numeric value {frame.iat[row + offset, column]!r}"
        raise te.IcviDataError(error_msg, row=int(row) + offset, column=int(column))

    values = numeric.to_numpy(dtype=np.float64)
    if not np.all(np.isfinite(values)):
        row, column = np.argwhere(~np.isfinite(values))[0]
        raise te.IcviDataError(
            "non-finite value", row=int(row) + offset, column=int(column)
        )

    labels: NDArray[np.int64] | None = None
    if has_labels:
        if values.shape[1] < 2:  # noqa: PLR2004
            raise te.IcviDataError("a labeled file needs a feature and a label column")
        raw_labels = values[:, -1]
        if (bad := np.flatnonzero(raw_labels != np.round(raw_labels))).size:
            raise te.IcviDataError(
                "label is not an integer",
                row=int(bad[0]) + offset,
                column=values.shape[1] - 1,
            )
        labels = raw_labels.astype(np.int64)
        values = values[:, :-1]

    dataset = Dataset(normalize(values), labels)
    logger.info(
        "ingested %s: %d samples, %d features, %s clusters",
        file.name,
        dataset.n_samples,
        dataset.dimension,
        "no" if labels is None else len(np.unique(labels)),
    )
    return dataset


def generate_d4(seed: int = DEFAULT_SEED) -> Dataset:
    """Four well-separated bivariate clusters in the unit square.

    Every cluster holds `D4_CLUSTER_SIZE` samples drawn from a normal
    distribution truncated at `D4_TRUNCATION` standard deviations around one
    of `D4_CENTERS`; labels run from 1 to 4 and the samples are normalized.

    Args:
        seed: seed of the generator.

    Returns:
        the labeled data set, clusters in label order
    """
    rng = np.random.default_rng(seed)
    blocks = [
        truncnorm.rvs(
            -D4_TRUNCATION,
            D4_TRUNCATION,
            loc=center,
            scale=D4_SCALE,
            size=(D4_CLUSTER_SIZE, len(center)),
            random_state=rng,
        )
        for center in D4_CENTERS
    ]
    labels = np.repeat(np.arange(1, len(D4_CENTERS) + 1), D4_CLUSTER_SIZE)
    return Dataset(normalize(np.vstack(blocks)), labels.astype(np.int64))


def presentation_order(
    labels: NDArray[np.int64] | None,
    n_samples: int,
    presentation: Presentation | PresentationLiteral,
    *,
    seed: int = DEFAULT_SEED,
    cluster_order: Sequence[int] | None = None,
) -> NDArray[np.intp]:
    """Order in which samples are presented.

    Cluster-by-cluster presentation streams whole ground-truth clusters in
    ascending label order (or in `cluster_order`) and shuffles the samples
    within each cluster.

    Args:
        labels: ground-truth labels, needed for cluster-by-cluster order.
        n_samples: number of samples.
        presentation: ordering scheme.
        seed: seed of the shuffles.
        cluster_order: permutation of the label set.

    Returns:
        sample indices in presentation order
    """
    presentation = Presentation(presentation)
    rng = np.random.default_rng(seed)
    if presentation is Presentation.AS_IS:
        return np.arange(n_samples)
    if presentation is Presentation.SHUFFLED:
        return rng.permutation(n_samples)

    if labels is None:
        raise te.IcviConfigError("cluster-by-cluster presentation needs labels")
    distinct = np.unique(labels)
    if cluster_order is None:
        order = distinct
    else:
        order = np.asarray(cluster_order, dtype=np.int64)
        if sorted(order.tolist()) != distinct.tolist():
            error_msg = (
                f"cluster order {order.tolist()} is not a permutation of the labels "
                f"{distinct.tolist()}"
            )
            raise te.IcviConfigError(error_msg)
    return np.concatenate(
        [rng.permutation(np.flatnonzero(labels == label)) for label in order]
    )


def write_dataset(path: str | PathLike[str], dataset: Dataset) -> None:
    """Write a data set as headerless CSV, labels in the last column."""
    frame = pd.DataFrame(dataset.samples)
    if dataset.labels is not None:
        frame[frame.shape[1]] = dataset.labels
    frame.to_csv(path, header=False, index=False, float_format="%.17g")
