from __future__ import annotations

from typing import Any

import numpy as np
import pytest

from streaming_icvi.core.types import IndexKind

R15_ENV = "STREAMING_ICVI_R15"

CENTROID_KINDS = tuple(kind for kind in IndexKind if not kind.is_prototype_level)


def planted_stream(
    seed: int, n_samples: int, dimension: int, k: int
) -> tuple[np.ndarray, np.ndarray]:
    """Gaussian blobs in the unit cube, shuffled into one stream."""
    rng = np.random.default_rng(seed)
    centers = rng.uniform(0.2, 0.8, size=(k, dimension))
    labels = rng.integers(0, k, size=n_samples)
    samples = centers[labels] + rng.normal(scale=0.05, size=(n_samples, dimension))
    return np.clip(samples, 0.0, 1.0), labels


def approx(expected: float | None, rel: float = 1e-8, absolute: float = 1e-10) -> Any:
    if expected is None:
        return None
    return pytest.approx(expected, rel=rel, abs=absolute)


stream_params = pytest.mark.parametrize(
    ("seed", "n_samples", "dimension", "k"),
    (
        pytest.param(0, 150, 2, 3, id="d2-k3"),
        pytest.param(1, 150, 2, 5, id="d2-k5"),
        pytest.param(2, 150, 5, 4, id="d5-k4"),
        pytest.param(3, 120, 5, 8, id="d5-k8"),
        pytest.param(4, 200, 2, 8, id="d2-k8"),
        pytest.param(5, 100, 5, 2, id="d5-k2"),
    ),
)
