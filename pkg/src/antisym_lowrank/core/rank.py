"""Multilinear rank of antisymmetric tensors and the rank-attaining constructions.

All matricizations of an antisymmetric tensor agree up to sign, so its
multilinear rank is a single integer read off the mode-0 matricization.
Attainable values are 0, d and d+2..n (d >= 3); the constructions here
produce tensors with exact +-1 entries that hit the bounds.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple

import numpy as np

from antisym_lowrank.core.base import ParameterError, StructureError
from antisym_lowrank.core.linalg import singular_values
from antisym_lowrank.core.tensor import (
    ArrayLike,
    DenseTensor,
    _as_array,
    is_antisymmetric,
    matricize,
    signed_permutations,
)

logger = logging.getLogger(__name__)


@dataclass
class RankReport:
    """Numerical rank with the singular values it was decided from."""

    rank: int
    singular_values: np.ndarray
    tolerance_used: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "rank": self.rank,
            "singular_values": [float(s) for s in self.singular_values],
            "tolerance_used": self.tolerance_used,
        }


def _rank_of(matrix: np.ndarray, tol: Optional[float]) -> RankReport:
    sv = singular_values(matrix)
    if tol is None:
        top = float(sv[0]) if sv.size else 0.0
        tol = max(matrix.shape) * np.finfo(np.float64).eps * top
    rank = int(np.count_nonzero(sv > tol))
    return RankReport(rank=rank, singular_values=sv, tolerance_used=float(tol))


def multilinear_rank(a: ArrayLike, tol: Optional[float] = None) -> RankReport:
    """
    Multilinear rank of an antisymmetric tensor.

    Args:
        a: Antisymmetric tensor
        tol: Singular values above tol count; default is
            max(shape of A_(0)) * machine epsilon * sigma_1

    Returns:
        RankReport of the mode-0 matricization

    Raises:
        StructureError: If a is not antisymmetric (use `multilinear_ranks`
            for general tensors)
    """
    arr = _as_array(a)
    if arr.ndim < 2 or not is_antisymmetric(arr):
        raise StructureError("multilinear_rank needs an antisymmetric tensor")
    report = _rank_of(matricize(arr, 0).matrix, tol)
    logger.debug("multilinear rank %d (tol %.3g)", report.rank, report.tolerance_used)
    return report


def multilinear_ranks(x: ArrayLike, tol: Optional[float] = None) -> Tuple[int, ...]:
    """Per-mode numerical ranks (r_0, ..., r_{d-1}) of a general tensor."""
    arr = _as_array(x)
    return tuple(_rank_of(matricize(arr, mu).matrix, tol).rank for mu in range(arr.ndim))


def _fan_out(out: np.ndarray, base: Tuple[int, ...], value: float) -> None:
    """Write value * sign(pi) at every permutation base o pi of an index tuple."""
    for perm, sign in signed_permutations(len(base)):
        out[tuple(base[k] for k in perm)] = sign * value


def construct_rank_d(d: int, n: Optional[int] = None) -> DenseTensor:
    """
    Antisymmetric tensor of multilinear rank exactly d.

    Equals d! * antisym(e_0 (x) e_1 (x) ... (x) e_{d-1}): entry sign(pi) at
    every permutation of (0, ..., d-1), zero elsewhere. With n > d the
    tensor is bordered with zeros, which keeps the rank.

    Args:
        d: Order, at least 2
        n: Dimension, defaults to d

    Raises:
        ParameterError: If d < 2 or n < d
    """
    n = d if n is None else n
    if d < 2:
        raise ParameterError(f"construct_rank_d needs d >= 2, got {d}")
    if n < d:
        raise ParameterError(f"construct_rank_d needs n >= d, got n={n}, d={d}")
    out = np.zeros((n,) * d)
    _fan_out(out, tuple(range(d)), 1.0)
    return DenseTensor._wrap(out)


def construct_rank_n(n: int, d: int) -> DenseTensor:
    """
    Antisymmetric tensor of multilinear rank exactly n (n >= d + 2).

    With the cyclic index sequence h = (0, 1, ..., n-1, 0, ..., d-2), the
    tensor is antisym(X) where X is -d! on each window (h_k, ..., h_{k+d-1})
    and zero elsewhere. Windows are distinct index sets, so every window
    entry of the result is exactly -1 and the rest of its orbit carries
    -sign(pi).

    Raises:
        ParameterError: If d < 3 or n < d + 2
    """
    if d < 3:
        raise ParameterError(f"construct_rank_n needs d >= 3, got {d}")
    if n < d + 2:
        raise ParameterError(f"construct_rank_n needs n >= d + 2, got n={n}, d={d}")
    h = list(range(n)) + list(range(d - 1))
    out = np.zeros((n,) * d)
    for k in range(n):
        _fan_out(out, tuple(h[k:k + d]), -1.0)
    return DenseTensor._wrap(out)


def admissible_rank(n: int, d: int, r: int) -> bool:
    """
    Whether an antisymmetric n^d tensor can have multilinear rank r.

    d >= 3: r = 0, r = d (n >= d) or d + 2 <= r <= n.
    d == 2: skew-symmetric matrices, so even r <= n.
    d == 1: vectors, r in {0, 1}.
    """
    if n < 1 or d < 1:
        raise ParameterError(f"admissible_rank needs n, d >= 1, got n={n}, d={d}")
    if r == 0:
        return True
    if r < 0 or r > n:
        return False
    if d == 1:
        return r == 1
    if d == 2:
        return r % 2 == 0
    if n < d:
        return False
    return r == d or d + 2 <= r <= n


def attainable_ranks(n: int, d: int) -> Tuple[int, ...]:
    """All admissible ranks for n^d antisymmetric tensors in increasing order."""
    return tuple(r for r in range(n + 1) if admissible_rank(n, d, r))

