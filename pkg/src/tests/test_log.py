from __future__ import annotations

import logging
import threading

import pytest

from streaming_icvi.core.context import RunScope, context, run_scope, tag
from streaming_icvi.log import ScopeFormatter, get_logger, set_level

FORMAT = "[%(scope)s@%(worker)d step=%(step)s] %(message)s"


def _record(message: str = "hello", **extra) -> logging.LogRecord:
    record = logging.LogRecord("test", logging.INFO, __file__, 1, message, (), None)
    record.__dict__.update(extra)
    return record


def test_label():
    assert RunScope("run", 1).label == "run"
    assert RunScope("sweep", 1, ("rho_a=0.9000",)).label == "sweep:rho_a=0.9000"


def test_context_sets_scope():
    @context("work")
    def work() -> RunScope:
        return run_scope.get()

    scope = work()
    assert scope.name == "work"
    assert scope.worker == threading.get_native_id()
    assert scope.tags == ()
    assert run_scope.get() != scope


def test_context_uses_qualname():
    @context
    def named() -> str:
        return run_scope.get().name

    assert named().endswith("named")


def test_tag_nests_and_resets():
    @context("sweep")
    def work() -> list[str]:
        labels = []
        with tag("rho_a=0.9000"):
            with tag("seed=3"):
                labels.append(run_scope.get().label)
            labels.append(run_scope.get().label)
        labels.append(run_scope.get().label)
        return labels

    assert work() == ["sweep:rho_a=0.9000:seed=3", "sweep:rho_a=0.9000", "sweep"]


def test_context_drops_caller_tags():
    @context("inner")
    def inner() -> tuple[str, ...]:
        return run_scope.get().tags

    with tag("outer"):
        assert inner() == ()


def test_formatter():
    formatter = ScopeFormatter(FORMAT)

    @context("run")
    def emit() -> str:
        with tag("seed=0"):
            return formatter.format(_record(step=7))

    worker = threading.get_native_id()
    assert emit() == f"[run:seed=0@{worker} step=7] hello"


def test_formatter_without_step():
    line = ScopeFormatter(FORMAT).format(_record())
    assert line.endswith("step=-] hello")


@pytest.mark.parametrize(("level", "expected"), [("debug", 10), ("30", 30), (40, 40)])
def test_set_level(level, expected):
    logger = get_logger()
    before = logger.level
    try:
        set_level(level)
        assert logger.level == expected
        assert get_logger("harness").getEffectiveLevel() == expected
    finally:
        logger.setLevel(before)
