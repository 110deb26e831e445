"""Utilities module."""

from antisym_lowrank.utils.config_loader import load_config
from antisym_lowrank.utils.logging_setup import configure_logging
from antisym_lowrank.utils.tensor_io import format_tensor, parse_tensor, read_tensor, write_tensor
from antisym_lowrank.utils.trace_io import read_rows, write_rows, write_trace

__all__ = [
    "load_config",
    "configure_logging",
    "format_tensor",
    "parse_tensor",
    "read_tensor",
    "write_tensor",
    "write_trace",
    "write_rows",
    "read_rows",
]
