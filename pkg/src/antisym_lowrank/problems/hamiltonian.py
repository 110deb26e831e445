"""Discretized Hamiltonian and its antisymmetric ground state.

H = -1/2 sum_mu d^2/dx_mu^2 + c_v sum_mu cos(2 pi x_mu)
    + c_w sum_{mu < nu} cos(2 pi (x_mu - x_nu))

on n grid points per variable, xi_i = 2 pi i / n in [0, 2 pi), with periodic
central differences of spacing h = 2 pi / n. H commutes with permutations of
the variables, so it maps antisymmetric tensors to antisymmetric tensors.

The ground state is computed on orbit coordinates: one coefficient per
strictly increasing index tuple t, with orthonormal basis
sqrt(d!) * antisym(e_{t_0} (x) ... (x) e_{t_{d-1}}). The Lanczos iteration
then never leaves the antisymmetric subspace.
"""

import logging
import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh

from antisym_lowrank.core.base import ConvergenceError, InvalidShapeError, ParameterError
from antisym_lowrank.core.tensor import (
    ArrayLike,
    DenseTensor,
    _as_array,
    antisymmetrize,
    orbit_representatives,
    signed_permutations,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HamiltonianSpec:
    """Grid Hamiltonian parameters.

    Attributes:
        d: Number of variables (tensor order)
        n: Grid points per variable, at least 3
        c_v: Potential strength
        c_w: Pair interaction strength
    """

    d: int
    n: int
    c_v: float = 100.0
    c_w: float = 5.0

    def __post_init__(self):
        if self.d < 1:
            raise ParameterError(f"d must be positive, got {self.d}")
        if self.n < 3:
            raise ParameterError(f"central differences need n >= 3, got {self.n}")
        if not (math.isfinite(self.c_v) and math.isfinite(self.c_w)):
            raise ParameterError("c_v and c_w must be finite")

    @property
    def h(self) -> float:
        return 2.0 * math.pi / self.n

    @property
    def grid(self) -> np.ndarray:
        return self.h * np.arange(self.n)


@lru_cache(maxsize=8)
def potential(spec: HamiltonianSpec) -> np.ndarray:
    """Diagonal of the potential part on the n^d grid (read-only)."""
    d, n = spec.d, spec.n
    xi = spec.grid
    out = np.zeros((n,) * d)
    for mu in range(d):
        shape = [1] * d
        shape[mu] = n
        out = out + spec.c_v * np.reshape(np.cos(2.0 * math.pi * xi), shape)
    diff = np.cos(2.0 * math.pi * (xi[:, None] - xi[None, :]))
    for mu in range(d):
        for nu in range(mu + 1, d):
            shape = [1] * d
            shape[mu] = n
            shape[nu] = n
            out = out + spec.c_w * np.reshape(diff, shape)
    out.setflags(write=False)
    return out


def hamiltonian_apply(spec: HamiltonianSpec, x: ArrayLike) -> DenseTensor:
    """
    Apply the discretized Hamiltonian to an n^d tensor.

    Cost O(d n^d) per application; no matrix is formed.

    Raises:
        InvalidShapeError: If x is not of shape n^d
    """
    arr = _as_array(x)
    if arr.shape != (spec.n,) * spec.d:
        raise InvalidShapeError(f"expected shape {(spec.n,) * spec.d}, got {arr.shape}")
    lap = np.zeros_like(arr)
    for mu in range(spec.d):
        lap += np.roll(arr, 1, axis=mu) + np.roll(arr, -1, axis=mu)
    lap -= 2.0 * spec.d * arr
    return DenseTensor._wrap(-0.5 * lap / (spec.h * spec.h) + potential(spec) * arr)


def orbit_coordinates(x: ArrayLike) -> np.ndarray:
    """
    Coefficients of the orthogonal projection of x onto the antisymmetric
    subspace in the orbit basis, one per strictly increasing index tuple.
    """
    arr = _as_array(x)
    n, d = arr.shape[0], arr.ndim
    reps = orbit_representatives(n, d)
    coords = np.zeros(reps.shape[0])
    for perm, sign in signed_permutations(d):
        coords += sign * arr[tuple(reps[:, list(perm)].T)]
    return coords / math.sqrt(math.factorial(d))


def from_orbit_coordinates(coords: np.ndarray, n: int, d: int) -> DenseTensor:
    """Antisymmetric n^d tensor with the given orbit coordinates."""
    reps = orbit_representatives(n, d)
    coords = np.asarray(coords, dtype=np.float64)
    if coords.shape != (reps.shape[0],):
        raise InvalidShapeError(f"expected {reps.shape[0]} orbit coordinates, got {coords.shape}")
    out = np.zeros((n,) * d)
    scaled = coords / math.sqrt(math.factorial(d))
    for perm, sign in signed_permutations(d):
        out[tuple(reps[:, list(perm)].T)] = sign * scaled
    return DenseTensor._wrap(out)


@dataclass
class GroundState:
    """Lowest eigenpair of the Hamiltonian on antisymmetric tensors.

    Attributes:
        eigenvalue: Rayleigh quotient of the eigentensor
        eigentensor: Antisymmetric tensor of unit Frobenius norm
        residual: ||antisym(H v) - eigenvalue * v||
        attempts: Eigensolver runs needed to reach the tolerance
    """

    eigenvalue: float
    eigentensor: DenseTensor
    residual: float
    attempts: int = 1

    def to_dict(self):
        return {
            "eigenvalue": self.eigenvalue,
            "residual": self.residual,
            "attempts": self.attempts,
            "dims": list(self.eigentensor.dims),
        }


def antisym_ground_state(
    spec: HamiltonianSpec,
    solver_tol: float = 1e-8,
    seed: Optional[int] = 0,
    max_attempts: int = 4,
) -> GroundState:
    """
    Smallest eigenvalue of antisym o H on the antisymmetric subspace.

    Runs ARPACK Lanczos (`eigsh`, which="SA") on the orbit coordinates from a
    random antisymmetrized start vector, tightening the eigensolver tolerance
    until the residual is at most `solver_tol`.

    Raises:
        ParameterError: If d < 2 or n < d
        ConvergenceError: If the residual target is not met within max_attempts
    """
    d, n = spec.d, spec.n
    if d < 2 or n < d:
        raise ParameterError(f"antisymmetric subspace is trivial for n={n}, d={d}")
    size = math.comb(n, d)
    rng = np.random.default_rng(seed)
    v0 = orbit_coordinates(antisymmetrize(rng.random((n,) * d)))

    def matvec(c: np.ndarray) -> np.ndarray:
        x = from_orbit_coordinates(np.ravel(c), n, d)
        return orbit_coordinates(hamiltonian_apply(spec, x))

    op = LinearOperator((size, size), matvec=matvec, dtype=np.float64)
    logger.info("ground state: n=%d d=%d subspace dimension %d", n, d, size)

    tol = 1e-2 * solver_tol
    best: Optional[GroundState] = None
    for attempt in range(1, max_attempts + 1):
        try:
            if size <= 2:
                dense = np.column_stack([matvec(e) for e in np.eye(size)])
                values, vectors = np.linalg.eigh(0.5 * (dense + dense.T))
                coords = vectors[:, 0]
            else:
                ncv = min(size, max(20, 2 * attempt * 10))
                values, vectors = eigsh(
                    op, k=1, which="SA", v0=v0, tol=tol, ncv=ncv, maxiter=size * 10 * attempt
                )
                coords = vectors[:, 0]
        except ArpackNoConvergence as e:
            msg = f"ground state: Lanczos did not converge on attempt {attempt}"
            warnings.warn(msg, RuntimeWarning, stacklevel=2)
            logger.warning("%s (%s)", msg, e)
            if e.eigenvectors is not None and e.eigenvectors.shape[1] > 0:
                v0 = e.eigenvectors[:, 0]
            tol *= 1e-2
            continue

        v = from_orbit_coordinates(coords / np.linalg.norm(coords), n, d)
        hv = antisymmetrize(hamiltonian_apply(spec, v))
        eigenvalue = float(np.vdot(v.data, hv.data))
        residual = float(np.linalg.norm((hv.data - eigenvalue * v.data).ravel()))
        best = GroundState(eigenvalue=eigenvalue, eigentensor=v, residual=residual, attempts=attempt)
        logger.info(
            "ground state attempt %d: eigenvalue=%.12e residual=%.3e", attempt, eigenvalue, residual
        )
        if residual <= solver_tol:
            return best
        v0 = coords
        tol = tol * 1e-2 if attempt < max_attempts - 1 else 0.0

    raise ConvergenceError(
        f"ground state residual {best.residual if best else float('nan'):.3e} "
        f"above {solver_tol:.1e} after {max_attempts} attempts"
    )
