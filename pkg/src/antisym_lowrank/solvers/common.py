"""Input checks and initial factors shared by the solvers."""

import math
from typing import Tuple, Union

import numpy as np

from antisym_lowrank.core.base import (
    InitStrategy,
    InvalidShapeError,
    ParameterError,
    RankError,
    StructureError,
)
from antisym_lowrank.core.linalg import orthonormality_defect, svd_leading
from antisym_lowrank.core.tensor import ArrayLike, DenseTensor, is_antisymmetric, matricize

InitSpec = Union[str, InitStrategy, np.ndarray]

# Accepted ||U^T U - I|| for caller-supplied factors.
ORTHONORMAL_TOL = 1e-10


def as_tensor(a: ArrayLike) -> DenseTensor:
    return a if isinstance(a, DenseTensor) else DenseTensor(a)


def prepare_input(a: ArrayLike, r: int) -> Tuple[DenseTensor, int, int]:
    """
    Validate an approximation request.

    Returns:
        (tensor, n, d)

    Raises:
        InvalidShapeError: If the tensor is not cubical or has order < 2
        StructureError: If the tensor is not antisymmetric
        RankError: If r is outside 1..n
    """
    a = as_tensor(a)
    if a.order < 2 or not a.is_cubical:
        raise InvalidShapeError(f"expected a cubical tensor of order >= 2, got dims {a.dims}")
    if not is_antisymmetric(a):
        raise StructureError("input tensor is not antisymmetric")
    n, d = a.dims[0], a.order
    if not (1 <= r <= n):
        raise RankError(f"rank {r} outside 1..{n}")
    return a, n, d


def check_orthonormal(u: np.ndarray, n: int, r: int) -> np.ndarray:
    """Validate a caller-supplied n x r factor with orthonormal columns."""
    u = np.asarray(u, dtype=np.float64)
    if u.shape != (n, r):
        raise InvalidShapeError(f"initial factor must be {n}x{r}, got {u.shape}")
    if orthonormality_defect(u) > ORTHONORMAL_TOL:
        raise StructureError("initial factor columns are not orthonormal")
    return u


def hosvd_factor(a: DenseTensor, r: int) -> np.ndarray:
    """Leading r left singular vectors of the mode-0 matricization."""
    return svd_leading(matricize(a, 0).matrix, r).u


def initial_factor(a: DenseTensor, r: int, init: InitSpec) -> Tuple[np.ndarray, str]:
    """
    Resolve an initialization to an n x r factor.

    Args:
        a: Antisymmetric input tensor
        r: Number of columns
        init: "hosvd", "identity" or an explicit n x r orthonormal matrix

    Returns:
        (factor, label) where label names the init used
    """
    n = a.dims[0]
    if isinstance(init, np.ndarray):
        return check_orthonormal(init, n, r), "explicit"
    strategy = InitStrategy.parse(init)
    if strategy in (InitStrategy.HOSVD, InitStrategy.AUTO):
        return hosvd_factor(a, r), InitStrategy.HOSVD.value
    if strategy is InitStrategy.IDENTITY:
        return np.eye(n)[:, :r], InitStrategy.IDENTITY.value
    raise ParameterError(f"init '{strategy.value}' does not produce an n x r factor")


def projection_error(norm_sq: float, objective: float) -> float:
    """sqrt(max(||A||^2 - ||S||^2, 0)) for a core obtained by orthogonal projection."""
    return math.sqrt(max(norm_sq - objective * objective, 0.0))
