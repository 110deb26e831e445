"""CSV output for convergence traces and trial tables."""

import csv
from pathlib import Path
from typing import Any, Dict, Iterable, List, Sequence, Union

from antisym_lowrank.core.results import TRACE_COLUMNS, ConvergenceTrace

PathLike = Union[str, Path]


def write_trace(path: PathLike, trace: ConvergenceTrace) -> None:
    """Write a trace with the header iteration,objective,error,gradnorm,pivot_i,pivot_j."""
    write_rows(path, TRACE_COLUMNS, trace.rows())


def write_rows(path: PathLike, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(header)
        writer.writerows(rows)


def read_rows(path: PathLike) -> List[Dict[str, str]]:
    """Rows of a CSV file as dicts keyed by the header."""
    with open(path, "r", encoding="utf-8", newline="") as f:
        return list(csv.DictReader(f))
