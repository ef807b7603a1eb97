from __future__ import annotations

import threading
from contextlib import contextmanager
from contextvars import ContextVar, copy_context
from functools import partial, wraps
from typing import TYPE_CHECKING, Any, NamedTuple, overload

from typing_extensions import TypeVar

from streaming_icvi.core.const import DEFAULT_LOG_CONTEXT, DEFAULT_LOG_THREAD

if TYPE_CHECKING:
    from collections.abc import Callable, Generator

__all__ = ["RunScope", "run_scope", "context", "tag"]

_F = TypeVar("_F", bound="Callable[..., Any]", infer_variance=True)


class RunScope(NamedTuple):
    """Where a log record was emitted: entry point, worker thread and tags."""

    name: str
    worker: int
    tags: tuple[str, ...] = ()

    @property
    def label(self) -> str:
        """Entry point name followed by its tags, e.g. `sweep:rho_a=0.9000`."""
        return ":".join((self.name, *self.tags))


run_scope: ContextVar[RunScope] = ContextVar(
    "streaming_icvi_run_scope",
    default=RunScope(DEFAULT_LOG_CONTEXT, DEFAULT_LOG_THREAD),
)


@contextmanager
def _enter(scope: RunScope) -> Generator[RunScope, None, None]:
    token = run_scope.set(scope)
    try:
        yield scope
    finally:
        run_scope.reset(token)


@contextmanager
def tag(label: str) -> Generator[RunScope, None, None]:
    """Append `label` to the current scope's tags while the block runs.

    Args:
        label: short tag such as `"seed=3"`.

    Yields:
        the tagged scope
    """
    current = run_scope.get()
    with _enter(current._replace(tags=(*current.tags, label))) as scope:
        yield scope


@overload
def context(func_or_context: str) -> Callable[[_F], _F]: ...
@overload
def context(func_or_context: _F) -> _F: ...
@overload
def context(func_or_context: _F | str) -> _F | Callable[[_F], _F]: ...
def context(func_or_context: _F | str) -> _F | Callable[[_F], _F]:
    """Decorator running the function in a fresh scope named after it.

    The scope records the calling thread, so records from pool workers can be
    told apart. Tags of the caller are dropped.

    Args:
        func_or_context: The function to decorate or the scope name to set.

    Returns:
        The decorated function or the decorator.
    """
    if not isinstance(func_or_context, str):
        name = getattr(func_or_context, "__qualname__", func_or_context.__name__)
        return _context(func_or_context, name=name)

    return partial(_context, name=func_or_context)


def _context(func: _F, *, name: str) -> _F:
    @wraps(func)
    def wrapped(*args: Any, **kwargs: Any) -> Any:
        with _enter(RunScope(name, threading.get_native_id())):
            return copy_context().run(func, *args, **kwargs)

    return wrapped  # pyright: ignore[reportReturnType]
