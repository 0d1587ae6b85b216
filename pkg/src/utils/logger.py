import logging
import os
import sys
from typing import Union

LOGGER_NAME = "moebius_knot"
LEVEL_ENV = "MOEBIUS_LOG_LEVEL"


def _parse_level(level: Union[int, str, None]) -> int:
    if isinstance(level, int):
        return level
    value = logging.getLevelName(str(level or "INFO").upper())
    return value if isinstance(value, int) else logging.INFO


def setup_logger(name: str = LOGGER_NAME, level: Union[int, str, None] = None) -> logging.Logger:
    """Logger writing to stderr; stdout carries the JSON results of the CLI."""
    logger = logging.getLogger(name)
    level = _parse_level(level if level is not None else os.getenv(LEVEL_ENV))
    logger.setLevel(level)
    logger.propagate = False

    if not logger.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setLevel(level)
        handler.setFormatter(logging.Formatter(
            '%(asctime)s - %(name)s.%(module)s - %(levelname)s - %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        ))
        logger.addHandler(handler)

    return logger


def set_level(level: Union[int, str]) -> None:
    level = _parse_level(level)
    logger.setLevel(level)
    for handler in logger.handlers:
        handler.setLevel(level)


logger = setup_logger()
