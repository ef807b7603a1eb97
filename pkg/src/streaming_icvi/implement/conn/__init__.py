from __future__ import annotations

from streaming_icvi.implement.conn.state import ConnState

__all__ = ["ConnState"]
