"""
Logging system

structlog over the standard library, rendered to stderr through rich.
stdout stays reserved for computation results.
"""

import logging
from pathlib import Path
from typing import Any, Optional

import structlog
from rich.console import Console
from rich.logging import RichHandler


class Logger:
    """
    Structured logger used across khoma

    Computation stages log at DEBUG with structured fields
    (generator counts, pivots, slice sizes). A log file, when set, receives
    the same records as stderr.
    """

    def __init__(
        self,
        name: str = "khoma",
        level: str = "INFO",
        log_file: Optional[str | Path] = None,
        json_format: bool = False,
    ):
        """
        Args:
            name: logger name
            level: DEBUG, INFO, WARNING or ERROR
            log_file: optional file that receives a copy of every record
            json_format: render JSON lines instead of console output
        """
        self.name = name
        self.level = getattr(logging, level.upper(), logging.INFO)
        self.log_file = Path(log_file) if log_file else None
        self.json_format = json_format

        self._configure_logging()
        self._logger = structlog.get_logger(name)

    def _configure_logging(self) -> None:
        handlers = [self._get_console_handler()]
        if self.log_file:
            self.log_file.parent.mkdir(parents=True, exist_ok=True)
            handlers.append(logging.FileHandler(self.log_file, encoding="utf-8"))

        logging.basicConfig(
            level=self.level,
            format="%(message)s",
            handlers=handlers,
            force=True,
        )

        processors = [
            structlog.contextvars.merge_contextvars,
            structlog.processors.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
        ]

        if self.json_format:
            processors.append(structlog.processors.JSONRenderer())
        else:
            processors.append(
                structlog.dev.ConsoleRenderer(
                    colors=False,
                    exception_formatter=structlog.dev.plain_traceback,
                )
            )

        structlog.configure(
            processors=processors,
            wrapper_class=structlog.make_filtering_bound_logger(self.level),
            context_class=dict,
            logger_factory=structlog.stdlib.LoggerFactory(),
            cache_logger_on_first_use=False,
        )

    def _get_console_handler(self) -> logging.Handler:
        console = Console(stderr=True)
        return RichHandler(
            console=console,
            show_time=False,
            show_path=False,
            rich_tracebacks=True,
        )

    def debug(self, message: str, **kwargs: Any) -> None:
        self._logger.debug(message, **kwargs)

    def info(self, message: str, **kwargs: Any) -> None:
        self._logger.info(message, **kwargs)

    def warning(self, message: str, **kwargs: Any) -> None:
        self._logger.warning(message, **kwargs)

    def progress(self, message: str, **kwargs: Any) -> None:
        self._logger.debug(f"... {message}", **kwargs)

    def bind(self, **kwargs: Any) -> "Logger":
        """
        Return a logger carrying extra context on every record

        Example:
            log = get_logger().bind(link="3_1", ring="Q")
            log.debug("built complex", size=24)  # includes link and ring
        """
        bound = Logger.__new__(Logger)
        bound.name = self.name
        bound.level = self.level
        bound.log_file = self.log_file
        bound.json_format = self.json_format
        bound._logger = self._logger.bind(**kwargs)
        return bound


_global_logger: Optional[Logger] = None


def get_logger(
    name: str = "khoma",
    level: Optional[str] = None,
    **kwargs: Any,
) -> Logger:
    """
    Return the process-wide logger, creating it on first use

    Args:
        name: logger name
        level: explicit level; defaults to KHOMA_LOG_LEVEL, then app.debug
        **kwargs: forwarded to Logger; log_file and json_format default to
            KHOMA_LOG_FILE and KHOMA_LOG_JSON

    Returns:
        Logger instance
    """
    global _global_logger

    if _global_logger is None:
        if level is None:
            try:
                from .config import get_config

                config = get_config()
                level = config.log_level or ("DEBUG" if config.app.debug else "WARNING")
                kwargs.setdefault("json_format", config.log_json)
                kwargs.setdefault("log_file", config.log_file)
            except Exception:
                level = "WARNING"

        _global_logger = Logger(name=name, level=level, **kwargs)

    return _global_logger


def configure_logging(
    level: Optional[str] = None, log_file: Optional[str | Path] = None
) -> Logger:
    """Reconfigure the global logger in place; bind() afterwards for new context."""
    log = get_logger()
    if level is not None:
        log.level = getattr(logging, level.upper(), logging.INFO)
    if log_file is not None:
        log.log_file = Path(log_file)
    log._configure_logging()
    log._logger = structlog.get_logger(log.name)
    return log
