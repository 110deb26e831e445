"""Riemannian gradients of the Tucker and rank-1 objectives.

The Tucker objective is f(U_0, ..., U_{d-1}) = ||A x_0 U_0^T ... x_{d-1} U_{d-1}^T||^2
on a product of Stiefel manifolds; the rank-1 objective is the multilinear
form A(u_0, ..., u_{d-1}) on a product of unit spheres.
"""

import math
from typing import List, Sequence

import numpy as np

from antisym_lowrank.core.base import InvalidShapeError
from antisym_lowrank.core.tensor import (
    ArrayLike,
    _as_array,
    contract_except,
    matricize,
    multi_mode_product,
)


def partial_contraction(a: ArrayLike, factors: Sequence[np.ndarray], mu: int) -> np.ndarray:
    """Mode-mu matricization of A x_{nu != mu} U_nu^T (n x prod of other ranks)."""
    arr = _as_array(a)
    mats = [None if nu == mu else u for nu, u in enumerate(factors)]
    return matricize(multi_mode_product(arr, mats, transpose=True), mu).matrix


def hooi_gradient_components(
    a: ArrayLike,
    factors: Sequence[np.ndarray],
    orthogonalize_modes: bool = False,
) -> List[np.ndarray]:
    """
    Per-mode Riemannian gradients 2 (I - U_mu U_mu^T) M M^T U_mu, with
    M the mode-mu matricization of A contracted by all other factors.

    With `orthogonalize_modes`, M is first projected onto the orthogonal
    complement of the other factors, which gives the gradient of the problem
    restricted to mutually orthogonal factors.

    Raises:
        InvalidShapeError: If the number of factors differs from the order
    """
    arr = _as_array(a)
    if len(factors) != arr.ndim:
        raise InvalidShapeError(f"expected {arr.ndim} factors, got {len(factors)}")
    components = []
    for mu, u in enumerate(factors):
        m = partial_contraction(arr, factors, mu)
        if orthogonalize_modes:
            w = np.column_stack([f for nu, f in enumerate(factors) if nu != mu])
            m = m - w @ (w.T @ m)
        g = m @ (m.T @ u)
        components.append(2.0 * (g - u @ (u.T @ g)))
    return components


def hooi_gradient(
    a: ArrayLike,
    factors: Sequence[np.ndarray],
    orthogonalize_modes: bool = False,
) -> float:
    """Norm of the Riemannian gradient of the Tucker objective."""
    components = hooi_gradient_components(a, factors, orthogonalize_modes)
    return math.sqrt(sum(float(np.sum(c * c)) for c in components))


def hopm_gradient(a: ArrayLike, vectors: Sequence[np.ndarray]) -> float:
    """sqrt(sum_mu ||v_mu - (u_mu^T v_mu) u_mu||^2) with v_mu = A x_{nu != mu} u_nu^T."""
    arr = _as_array(a)
    total = 0.0
    for mu, u in enumerate(vectors):
        v = contract_except(arr, vectors, mu)
        tangent = v - float(u @ v) * u
        total += float(tangent @ tangent)
    return math.sqrt(total)
