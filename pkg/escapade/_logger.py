"""
Logging setup of the application, library modules log to children of the
``escapade`` logger with ``logging.getLogger(__name__)``.
"""
import logging
import sys

from colorama import Fore, Style

from .console import colorize

__all__ = [
    'DEFAULT_FORMAT',
    'LevelColorFormatter',
    'setup_logger',
    'add_file_handler',
]

DEFAULT_FORMAT = '%(levelname)s %(name)s: %(message)s'

LEVEL_COLORS = {
    logging.DEBUG: Fore.LIGHTBLACK_EX,
    logging.INFO: Fore.LIGHTBLUE_EX,
    logging.WARNING: Fore.YELLOW,
    logging.ERROR: Fore.RED,
}


class LevelColorFormatter(logging.Formatter):
    """Colors a whole record after its level, critical shows as error."""

    def format(self, record: logging.LogRecord) -> str:
        level = min(record.levelno, logging.ERROR)
        return colorize(
            f'\r\x1b[K{super().format(record)}',
            fg=LEVEL_COLORS.get(level),
            style=Style.BRIGHT,
        )


def setup_logger(name='escapade', level=logging.INFO, stream=None):
    """
    Attach a colored stream handler to the logger ``name`` once.

    :param name: Logger to configure.
    :param level: Level of the logger.
    :param stream: Output of the handler, default to stderr.
    :return: The logger.
    """
    logger = logging.getLogger(name)
    if not logger.handlers:
        handler = logging.StreamHandler(stream=stream or sys.stderr)
        handler.setFormatter(LevelColorFormatter(DEFAULT_FORMAT))
        logger.addHandler(handler)
    logger.setLevel(level)
    logger.propagate = False
    return logger


def add_file_handler(logger, stream):
    """Copy the records of ``logger`` without colors to ``stream``."""
    handler = logging.StreamHandler(stream)
    handler.setFormatter(logging.Formatter(DEFAULT_FORMAT))
    logger.addHandler(handler)
    return handler
