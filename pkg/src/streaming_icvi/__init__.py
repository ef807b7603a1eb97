from __future__ import annotations

from streaming_icvi.core.types import IndexKind
from streaming_icvi.implement import (
    ConnState,
    FuzzyArt,
    FuzzySmart,
    IndexSuite,
    complement_code,
    create_index,
)
from streaming_icvi.model import ExperimentConfig, load_config

__all__ = [
    "IndexKind",
    "IndexSuite",
    "create_index",
    "ConnState",
    "FuzzyArt",
    "FuzzySmart",
    "complement_code",
    "ExperimentConfig",
    "load_config",
]

__version__: str


def __getattr__(name: str) -> object:
    if name == "__version__":  # pragma: no cover
        from importlib.metadata import version

        _version = globals()["__version__"] = version("streaming-icvi")
        return _version
    error_msg = f"module {__name__!r} has no attribute {name!r}"
    raise AttributeError(error_msg)
