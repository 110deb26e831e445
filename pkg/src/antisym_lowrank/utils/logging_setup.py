"""Logging configuration for the command-line entry points."""

import logging
import sys
from typing import Union

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(level: Union[int, str] = "WARNING") -> None:
    """
    Send package log records to stderr.

    stdout stays reserved for command results. Calling this twice replaces
    the handler instead of duplicating output.
    """
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
        if not isinstance(level, int):
            raise ValueError(f"unknown log level: {level}")
    root = logging.getLogger("antisym_lowrank")
    for handler in list(root.handlers):
        if getattr(handler, "_antisym_cli", False):
            root.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    handler._antisym_cli = True  # type: ignore[attr-defined]
    root.addHandler(handler)
    root.setLevel(level)
    logging.captureWarnings(True)
