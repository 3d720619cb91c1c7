# Shared utilities: structured logging and execution tracking

import logging
import sys
import time
from functools import wraps
from typing import Any, Callable, Dict, Optional

import structlog

_configured = False


def configure_logging(level: str = "WARNING", fmt: str = "json") -> None:
    """Configure structlog once for the process; logs go to stderr"""
    global _configured

    renderer: Any
    if fmt == "console":
        renderer = structlog.dev.ConsoleRenderer(colors=False)
    else:
        renderer = structlog.processors.JSONRenderer()

    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.processors.add_log_level,
            structlog.processors.TimeStamper(fmt="iso", utc=True),
            renderer,
        ],
        wrapper_class=structlog.make_filtering_bound_logger(
            logging.getLevelName(level.upper())
        ),
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=False,
    )
    _configured = True


def setup_logging(component: str = "unknown") -> structlog.stdlib.BoundLogger:
    """Component-bound logger; configures from settings on first use"""
    if not _configured:
        from .config import get_config

        config = get_config()
        configure_logging(config.log_level, config.log_format.value)
    return structlog.get_logger().bind(component=component)


def measure_latency(func: Callable) -> Callable:
    """Decorator returning (result, latency_ms)"""
    @wraps(func)
    def wrapper(*args, **kwargs):
        start_time = time.perf_counter()
        result = func(*args, **kwargs)
        latency_ms = int((time.perf_counter() - start_time) * 1000)
        return result, latency_ms
    return wrapper


def execution_tracker(component: str, operation: str):
    """Log start/finish/failure of an operation with its latency"""
    def decorator(func: Callable) -> Callable:
        @wraps(func)
        def wrapper(*args, **kwargs):
            logger = setup_logging(component)
            start_time = time.perf_counter()
            logger.debug("operation_started", operation=operation)
            try:
                result = func(*args, **kwargs)
            except Exception as e:
                logger.info(
                    "operation_failed",
                    operation=operation,
                    latency_ms=int((time.perf_counter() - start_time) * 1000),
                    error_type=type(e).__name__,
                    error_message=str(e),
                )
                raise
            logger.debug(
                "operation_finished",
                operation=operation,
                latency_ms=int((time.perf_counter() - start_time) * 1000),
            )
            return result
        return wrapper
    return decorator


def execution_summary(operation: str, status: str, latency_ms: int,
                      metadata: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """Standard record for a tracked execution, used by verification reports"""
    summary: Dict[str, Any] = {
        "operation": operation,
        "status": status,
        "latency_ms": latency_ms,
    }
    if metadata:
        summary["metadata"] = metadata
    return summary
