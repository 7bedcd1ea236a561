"""Structured logging utilities.

Every record is a single JSON object so run logs can be grepped and parsed
alongside the CSV diagnostics.
"""

import json
import logging
import time
from contextlib import contextmanager
from datetime import datetime, timezone
from typing import Any

import numpy as np


def _jsonable(value: Any) -> Any:
    """Convert numpy scalars and enums into plain JSON values."""
    if isinstance(value, np.generic):
        return value.item()
    if hasattr(value, "value") and not isinstance(value, (int, float, str)):
        return value.value
    return value


class StructuredLogger:
    """JSON logger keyed by workflow step (params, evolve, certify, ...).

    Context fields set with set_context, such as the subcommand, are merged
    into every record until clear_context.
    """

    def __init__(self, logger: logging.Logger | None = None):
        self.logger = logger or logging.getLogger("rch_lab")
        self._context: dict[str, Any] = {}

    def set_context(self, **kwargs: Any) -> None:
        self._context.update(kwargs)

    def clear_context(self) -> None:
        self._context = {}

    def _format_log(
        self,
        level: str,
        step: str,
        message: str,
        duration_ms: int | None = None,
        **kwargs: Any,
    ) -> str:
        entry = {
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "level": level,
            "step": step,
            "message": message,
            **self._context,
            **{key: _jsonable(value) for key, value in kwargs.items()},
        }
        if duration_ms is not None:
            entry["duration_ms"] = duration_ms
        return json.dumps(entry, default=str)

    def debug(self, step: str, message: str, **kwargs: Any) -> None:
        # Formatted only when DEBUG is enabled
        if self.logger.isEnabledFor(logging.DEBUG):
            self.logger.debug(self._format_log("DEBUG", step, message, **kwargs))

    def info(self, step: str, message: str, duration_ms: int | None = None, **kwargs: Any) -> None:
        self.logger.info(self._format_log("INFO", step, message, duration_ms, **kwargs))

    def warning(
        self, step: str, message: str, duration_ms: int | None = None, **kwargs: Any
    ) -> None:
        self.logger.warning(self._format_log("WARNING", step, message, duration_ms, **kwargs))

    def error(self, step: str, message: str, duration_ms: int | None = None, **kwargs: Any) -> None:
        self.logger.error(self._format_log("ERROR", step, message, duration_ms, **kwargs))

    @contextmanager
    def timed_operation(self, step: str, message: str, **kwargs: Any):
        """Log message with its wall time when the block exits.

        Yields a dict; fields added to it during the block (termination,
        step counts) land in the completion record. A failing block is
        logged at error level and the exception re-raised.
        """
        start_time = time.perf_counter()
        extra_fields: dict[str, Any] = {}

        try:
            yield extra_fields
        except Exception as e:
            duration_ms = int((time.perf_counter() - start_time) * 1000)
            self.error(
                step,
                f"{message} - FAILED: {e!s}",
                duration_ms=duration_ms,
                error=str(e),
                **kwargs,
                **extra_fields,
            )
            raise
        duration_ms = int((time.perf_counter() - start_time) * 1000)
        self.info(step, message, duration_ms=duration_ms, **kwargs, **extra_fields)


structured_logger = StructuredLogger()
