"""Plain-text tensor files.

Format: a header line `tensor <d> <n_0> ... <n_{d-1}>` followed by the
entries in Fortran (mode-0 fastest) order as whitespace-separated decimals
with 17 significant digits, so a write/read cycle is bit-exact.
"""

import logging
from pathlib import Path
from typing import List, Union

import numpy as np

from antisym_lowrank.core.base import TensorFormatError
from antisym_lowrank.core.tensor import ArrayLike, DenseTensor, _as_array

logger = logging.getLogger(__name__)

HEADER_TAG = "tensor"
VALUES_PER_LINE = 8

PathLike = Union[str, Path]


def format_tensor(x: ArrayLike) -> str:
    """Text representation of a tensor in the file format."""
    arr = _as_array(x)
    values = np.ravel(arr, order="F")
    lines = [" ".join([HEADER_TAG, str(arr.ndim)] + [str(n) for n in arr.shape])]
    for start in range(0, values.size, VALUES_PER_LINE):
        lines.append(" ".join("%.17g" % v for v in values[start:start + VALUES_PER_LINE]))
    return "\n".join(lines) + "\n"


def parse_tensor(text: str) -> DenseTensor:
    """
    Parse the file format.

    Raises:
        TensorFormatError: On a malformed header, a wrong value count or
            unparsable numbers
    """
    tokens = text.split()
    if not tokens or tokens[0] != HEADER_TAG:
        raise TensorFormatError(f"missing '{HEADER_TAG}' header")
    try:
        d = int(tokens[1])
        dims = [int(t) for t in tokens[2:2 + d]]
    except (IndexError, ValueError) as e:
        raise TensorFormatError(f"malformed header: {e}") from None
    if d < 1 or len(dims) != d or any(n < 1 for n in dims):
        raise TensorFormatError(f"malformed header: order {d}, dims {dims}")
    payload: List[str] = tokens[2 + d:]
    expected = int(np.prod(dims))
    if len(payload) != expected:
        raise TensorFormatError(f"expected {expected} values for dims {dims}, got {len(payload)}")
    try:
        values = np.array([float(t) for t in payload], dtype=np.float64)
    except ValueError as e:
        raise TensorFormatError(f"invalid value: {e}") from None
    if not np.all(np.isfinite(values)):
        raise TensorFormatError("tensor entries must be finite")
    return DenseTensor.from_vector(dims, values)


def write_tensor(path: PathLike, x: ArrayLike) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_tensor(x), encoding="utf-8")
    logger.debug("wrote tensor %s to %s", _as_array(x).shape, path)


def read_tensor(path: PathLike) -> DenseTensor:
    """
    Read a tensor file.

    Raises:
        FileNotFoundError: If the file does not exist
        TensorFormatError: If the contents are malformed
    """
    return parse_tensor(Path(path).read_text(encoding="utf-8"))
