from __future__ import annotations

from streaming_icvi.log.formatter import ScopeFormatter
from streaming_icvi.log.main import get_logger, set_level

__all__ = ["ScopeFormatter", "get_logger", "set_level"]
