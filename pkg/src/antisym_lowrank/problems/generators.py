"""Test tensor generators: random batches, function samples and exact-rank inputs.

All random generators draw from `numpy.random.default_rng(seed)` (PCG64), so
the same seed reproduces the same tensor bit for bit.
"""

import logging
import warnings
from typing import Optional, Sequence

import numpy as np

from antisym_lowrank.core.base import ParameterError
from antisym_lowrank.core.linalg import random_orthonormal
from antisym_lowrank.core.tensor import (
    DenseTensor,
    antisymmetrize,
    tucker_expand,
    unit_tensor_product,
)

logger = logging.getLogger(__name__)

FUNCTION_ORDERS = (3, 4)


def random_antisymmetric(n: int, d: int, seed: Optional[int] = 0) -> DenseTensor:
    """
    Antisymmetrized tensor with i.i.d. U[0, 1) entries.

    For n < d the antisymmetric subspace is trivial and the zero tensor is
    returned with a warning.
    """
    if n < 1 or d < 2:
        raise ParameterError(f"random_antisymmetric needs n >= 1 and d >= 2, got n={n}, d={d}")
    rng = np.random.default_rng(seed)
    a = antisymmetrize(rng.random((n,) * d))
    if n < d:
        msg = f"n={n} < d={d}: antisymmetric tensor is identically zero"
        warnings.warn(msg, RuntimeWarning, stacklevel=2)
        logger.warning(msg)
    return a


def function_grid(n: int, d: int) -> DenseTensor:
    """
    Samples X(i_0, ..., i_{d-1}) = exp(-sqrt(sum_mu (mu + 1) xi_{i_mu}^2))
    on xi_i = i / (n - 1), before antisymmetrization.
    """
    if d not in FUNCTION_ORDERS:
        raise ParameterError(f"function tensor is defined for d in {FUNCTION_ORDERS}, got {d}")
    if n < 2:
        raise ParameterError(f"function tensor needs n >= 2, got {n}")
    xi = np.linspace(0.0, 1.0, n)
    total = np.zeros((n,) * d)
    for mu in range(d):
        shape = [1] * d
        shape[mu] = n
        total = total + (mu + 1) * np.reshape(xi * xi, shape)
    return DenseTensor._wrap(np.exp(-np.sqrt(total)))


def function_tensor(n: int, d: int) -> DenseTensor:
    """Antisymmetrized `function_grid`; its matricizations have rapidly decaying singular values."""
    return antisymmetrize(function_grid(n, d))


def slater_tensor(vectors: Sequence[np.ndarray], alpha: float = 1.0) -> DenseTensor:
    """antisym(alpha * v_0 (x) ... (x) v_{d-1})."""
    return antisymmetrize(unit_tensor_product(list(vectors)) * alpha)


def exact_rank_antisymmetric(n: int, d: int, r: int, seed: Optional[int] = 0) -> DenseTensor:
    """
    Antisymmetric tensor S x_0 U ... x_{d-1} U with a random antisymmetric
    r^d core and a random n x r orthonormal U; its multilinear rank is r for
    generic seeds when r is admissible.
    """
    if not (d <= r <= n):
        raise ParameterError(f"exact_rank_antisymmetric needs d <= r <= n, got d={d}, r={r}, n={n}")
    rng = np.random.default_rng(seed)
    core = antisymmetrize(rng.standard_normal((r,) * d))
    return tucker_expand(core, random_orthonormal(n, r, rng))
