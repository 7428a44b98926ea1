"""Centralised logging configuration using structlog."""

from __future__ import annotations

import logging
import sys
from contextlib import contextmanager
from typing import Any, Iterator

import structlog
from structlog import stdlib
from structlog.contextvars import (
    bind_contextvars,
    clear_contextvars,
    unbind_contextvars,
)

from .config import settings


_LOGGING_CONFIGURED = False


def configure_logging(level: int | str | None = None, *, force: bool = False) -> None:
    """Initialise structlog with a JSON formatter and contextvars support.

    Records go to stderr so that stdout stays free for CLI results.
    """

    global _LOGGING_CONFIGURED
    if _LOGGING_CONFIGURED and not force:
        return

    resolved = level if level is not None else settings.log_level
    if isinstance(resolved, str):
        resolved = logging.getLevelName(resolved.upper())
        if not isinstance(resolved, int):
            resolved = logging.INFO

    logging.basicConfig(
        format="%(message)s", stream=sys.stderr, level=resolved, force=force
    )
    logging.getLogger().setLevel(resolved)
    renderer = (
        structlog.processors.JSONRenderer()
        if settings.log_json
        else structlog.dev.ConsoleRenderer(colors=False)
    )
    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.stdlib.add_log_level,
            structlog.stdlib.filter_by_level,
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            renderer,
        ],
        wrapper_class=stdlib.BoundLogger,
        logger_factory=stdlib.LoggerFactory(),
        cache_logger_on_first_use=True,
    )
    _LOGGING_CONFIGURED = True


def get_logger(name: str | None = None) -> Any:
    """Return a structlog logger ensuring the configuration is ready."""

    configure_logging()
    return structlog.get_logger(name)


@contextmanager
def run_context(**values: Any) -> Iterator[None]:
    """Bind and automatically clean run-related context variables."""

    if not values:
        yield
        return
    configure_logging()
    bind_contextvars(**values)
    try:
        yield
    finally:
        unbind_contextvars(*values.keys())


def reset_context() -> None:
    """Remove all bound context variables, useful before a new CLI command."""

    configure_logging()
    clear_contextvars()


__all__ = ["configure_logging", "get_logger", "run_context", "reset_context"]
