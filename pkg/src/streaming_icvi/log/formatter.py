from __future__ import annotations

import logging

from typing_extensions import override

from streaming_icvi.core.context import run_scope

__all__ = ["ScopeFormatter"]


class ScopeFormatter(logging.Formatter):
    """Formatter exposing the run scope to format strings.

    Adds `scope` (entry point and tags) and `worker` (native thread id) to
    every record. A `step` passed through `extra` is kept; otherwise it is
    `"-"`.
    """

    @override
    def format(self, record: logging.LogRecord) -> str:
        scope = run_scope.get()
        record.scope = scope.label
        record.worker = scope.worker
        if not hasattr(record, "step"):
            record.step = "-"
        return super().format(record)
