# pyright: reportMissingModuleSource=false
# pyright: reportMissingImports=false
from __future__ import annotations

import logging
import sys
from functools import lru_cache
from logging.config import dictConfig
from pathlib import Path
from typing import Any

from streaming_icvi.core.const import DEFAULT_LOG_LEVEL

if sys.version_info >= (3, 11):  # pragma: no cover
    import tomllib as toml
else:  # pragma: no cover
    import tomli as toml

__all__ = ["get_logger", "set_level"]


def _parse_level(level: str | int) -> int | str:
    if isinstance(level, int):
        return level
    return int(level) if level.isdigit() else level.upper()


@lru_cache
def _root_name() -> str:
    file = Path(__file__).with_name("log.toml")
    with file.open("rb") as f:
        document: dict[str, Any] = toml.load(f)
    name: str = document["default"]
    config = document["config"]
    config["loggers"][name]["level"] = _parse_level(DEFAULT_LOG_LEVEL)
    dictConfig(config)
    return name


def get_logger(child: str | None = None) -> logging.Logger:
    """Get the package logger, configuring logging on first use.

    The level comes from `STREAMING_ICVI_LOG_LEVEL` (name or number).

    Args:
        child: optional suffix for a child logger, e.g. `"harness"`.

    Returns:
        the configured logger
    """
    name = _root_name()
    return logging.getLogger(f"{name}.{child}" if child else name)


def set_level(level: str | int) -> None:
    """Change the level of the package logger and all its children."""
    get_logger().setLevel(_parse_level(level))
