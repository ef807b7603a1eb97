from __future__ import annotations

import os
from pathlib import Path

import numpy as np
import pytest

from streaming_icvi.harness import Dataset, generate_d4, ingest

from tests.base import R15_ENV


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


@pytest.fixture
def four_points() -> tuple[np.ndarray, np.ndarray]:
    samples = np.array([[0.0, 0.0], [0.2, 0.0], [1.0, 0.0], [0.8, 0.0]])
    labels = np.array([0, 0, 1, 1])
    return samples, labels


@pytest.fixture(scope="session")
def d4() -> Dataset:
    return generate_d4(0)


@pytest.fixture(scope="session")
def r15() -> Dataset:
    path = os.environ.get(R15_ENV, "")
    if not path or not Path(path).is_file():
        pytest.skip(f"{R15_ENV} does not point to the R15 data file")
    return ingest(path)


@pytest.fixture
def write_csv(tmp_path):
    def write(text: str, name: str = "data.csv") -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return write
