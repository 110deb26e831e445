"""Jacobi rotation algorithm for antisymmetric low multilinear rank approximation.

Maximizes f(Q) = ||A_Q[:r, ..., :r]||^2 over orthogonal Q, where
A_Q = A x_0 Q^T ... x_{d-1} Q^T, by applying Givens rotations R(i, j, phi)
with i < r <= j. For one rotation only the entries of the leading block with
index i in exactly one position change, so

    f(R) - f(I) = d * (psi(phi) - psi(0)),
    psi(phi) = alpha1 cos^2 + 2 alpha2 sin cos + alpha3 sin^2,

with alpha1 = sum_p A(i, p)^2, alpha2 = sum_p A(i, p) A(j, p) and
alpha3 = sum_p A(j, p)^2 over multi-indices p in {0..r-1}^(d-1) avoiding i.
The rotated tensor is updated in place on the 2d hyperplanes it touches.

Usage:
    from antisym_lowrank.solvers.jacobi import jacobi

    result = jacobi(a, 6)              # HOSVD init, eps = 1 / (10 n)
    print(result.status, result.approx.error)
"""

import logging
import math
import time
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

import numpy as np

from antisym_lowrank.core.base import (
    ApproximationResult,
    BaseSolver,
    InitStrategy,
    ParameterError,
    SolverStatus,
)
from antisym_lowrank.core.linalg import orthonormal_completion, orthonormality_defect
from antisym_lowrank.core.results import ConvergenceTrace, TuckerApprox
from antisym_lowrank.core.tensor import (
    ArrayLike,
    _as_array,
    antisymmetrize,
    is_antisymmetric,
    rotate_inplace,
    tucker_project,
)
from antisym_lowrank.solvers.common import InitSpec, initial_factor, prepare_input, projection_error

logger = logging.getLogger(__name__)

# |alpha2| below this fraction of alpha1 + alpha3 is treated as zero.
ALPHA2_FLOOR = 1e-15


def pivot_pairs(n: int, r: int) -> List[Tuple[int, int]]:
    """Pivot list (0, r), ..., (0, n-1), (1, r), ..., (r-1, n-1)."""
    return [(i, j) for i in range(r) for j in range(r, n)]


def default_eps(n: int, eps_factor: float = 0.1) -> float:
    """Pivot threshold eps = eps_factor / n (1 / (10 n) by default)."""
    return eps_factor / n


def check_eps(eps: float, n: int) -> None:
    """Raise ParameterError unless 0 < eps < 2 / n."""
    if not (0.0 < eps < 2.0 / n):
        raise ParameterError(f"eps must lie in (0, 2/n) = (0, {2.0 / n:.6g}), got {eps}")


def angle_objective(phi: float, alpha1: float, alpha2: float, alpha3: float) -> float:
    """psi(phi) = alpha1 cos^2 phi + 2 alpha2 sin phi cos phi + alpha3 sin^2 phi."""
    c, s = math.cos(phi), math.sin(phi)
    return alpha1 * c * c + 2.0 * alpha2 * s * c + alpha3 * s * s


def optimal_angle(alpha1: float, alpha2: float, alpha3: float) -> float:
    """
    Maximizer of psi in [0, pi).

    The stationary points satisfy alpha2 t^2 + (alpha1 - alpha3) t - alpha2 = 0
    with t = tan(phi). The roots come from the cancellation-free formula and
    both are evaluated; the better one is kept.

    Returns:
        Angle in [0, pi); 0 or pi/2 when alpha2 is negligible
    """
    if alpha2 == 0.0 or abs(alpha2) <= ALPHA2_FLOOR * (abs(alpha1) + abs(alpha3)):
        return 0.0 if alpha1 >= alpha3 else math.pi / 2
    b = alpha1 - alpha3
    sign_b = 1.0 if b >= 0.0 else -1.0
    q = -0.5 * (b + sign_b * math.sqrt(b * b + 4.0 * alpha2 * alpha2))
    best_phi, best_val = 0.0, -math.inf
    for t in (q / alpha2, -alpha2 / q):
        phi = math.atan(t)
        if phi < 0.0:
            phi += math.pi
        val = angle_objective(phi, alpha1, alpha2, alpha3)
        if val > best_val:
            best_phi, best_val = phi, val
    return best_phi


def _leading_rows(arr: np.ndarray, r: int) -> np.ndarray:
    """A(:, p) for p in {0..r-1}^(d-1), as an n x r^(d-1) matrix."""
    block = arr[(slice(None),) + (slice(0, r),) * (arr.ndim - 1)]
    return np.reshape(block, (arr.shape[0], -1))


@lru_cache(maxsize=256)
def _avoiding_mask(r: int, d: int, i: int) -> np.ndarray:
    """Multi-indices p in {0..r-1}^(d-1) (flattened like `_leading_rows`) not containing i."""
    grid = np.indices((r,) * (d - 1)).reshape(d - 1, -1)
    mask = np.all(grid != i, axis=0)
    mask.setflags(write=False)
    return mask


def jacobi_gradient(a_k: ArrayLike, r: int) -> Tuple[np.ndarray, float]:
    """
    Gradient of f at Q = I along the pivot rotations.

    Args:
        a_k: Antisymmetric tensor (current rotated iterate)
        r: Target rank

    Returns:
        (g, norm) with g[i, j - r] = 2 d alpha2(i, j) for every pivot pair and
        norm = sqrt(sum g^2). Rotations inside the leading or the trailing
        block leave f unchanged, so these components carry the full gradient.
    """
    arr = _as_array(a_k)
    rows = _leading_rows(arr, r)
    g = 2.0 * arr.ndim * (rows[:r] @ rows[r:].T)
    return g, float(np.linalg.norm(g))


@dataclass
class JacobiState:
    """Mutable state of a Jacobi run.

    Attributes:
        q: Accumulated orthogonal matrix, a_k = A x_0 q^T ... x_{d-1} q^T
        a_k: Rotated tensor (writable, updated in place)
        r: Target rank
        eps: Pivot threshold
        cursor: Next position in the cyclic pivot list
        trace: Convergence trace
        accepted: Number of accepted rotations
        gains: Predicted increase d * (psi(phi) - psi(0)) per accepted rotation
    """

    q: np.ndarray
    a_k: np.ndarray
    r: int
    eps: float
    cursor: int = 0
    trace: ConvergenceTrace = field(default_factory=ConvergenceTrace)
    accepted: int = 0
    gains: List[float] = field(default_factory=list)

    @property
    def n(self) -> int:
        return self.q.shape[0]

    @property
    def d(self) -> int:
        return self.a_k.ndim

    def objective(self) -> float:
        """f = squared norm of the leading r^d block."""
        block = self.a_k[(slice(0, self.r),) * self.d]
        return float(np.sum(block * block))

    def alphas(self, i: int, j: int) -> Tuple[float, float, float]:
        rows = _leading_rows(self.a_k, self.r)
        mask = _avoiding_mask(self.r, self.d, i)
        xi, xj = rows[i][mask], rows[j][mask]
        return float(xi @ xi), float(xi @ xj), float(xj @ xj)

    def rotate(self, i: int, j: int, phi: float) -> None:
        """a_k <- a_k x_mu R^T in every mode and q <- q R."""
        c, s = math.cos(phi), math.sin(phi)
        rotate_inplace(self.a_k, i, j, c, s)
        qi = self.q[:, i].copy()
        self.q[:, i] = c * qi + s * self.q[:, j]
        self.q[:, j] = c * self.q[:, j] - s * qi

    def invariant_drift(self, norm_a: float) -> Dict[str, float]:
        """Deviation from antisymmetry, norm preservation and orthogonality."""
        antisym = max(
            (float(np.max(np.abs(np.swapaxes(self.a_k, k, k + 1) + self.a_k)))
             for k in range(self.d - 1)),
            default=0.0,
        )
        norm = float(np.linalg.norm(self.a_k.ravel()))
        return {
            "antisymmetry": antisym,
            "norm": abs(norm - norm_a) / max(norm_a, 1e-300),
            "orthogonality": orthonormality_defect(self.q),
        }


def _initial_state(a, n: int, r: int, eps: float, init: InitSpec) -> Tuple[JacobiState, str]:
    if not isinstance(init, np.ndarray) and InitStrategy.parse(init) is InitStrategy.IDENTITY:
        return JacobiState(q=np.eye(n), a_k=a.copy_data(), r=r, eps=eps), "identity"
    u, label = initial_factor(a, r, init)
    q = np.column_stack([u, orthonormal_completion(u)])
    return JacobiState(q=q, a_k=tucker_project(a, q).copy_data(), r=r, eps=eps), label


def jacobi(
    a: ArrayLike,
    r: int,
    eps: Optional[float] = None,
    grad_tol: float = 1e-10,
    max_pivots: int = 10000,
    init: InitSpec = "hosvd",
    reantisymmetrize_every: int = 500,
) -> ApproximationResult:
    """
    Jacobi algorithm for the antisymmetric multilinear rank-r approximation.

    Cycles through `pivot_pairs(n, r)` and accepts (i, j) when
    |g_ij| >= eps * ||g||, with g the current Jacobi gradient (refreshed after
    every accepted rotation), then rotates by the optimal angle.

    Args:
        a: Antisymmetric tensor
        r: Target rank, 1 <= r <= n
        eps: Pivot threshold in (0, 2/n); default 1 / (10 n)
        grad_tol: Stop when ||g|| <= grad_tol
        max_pivots: Cap on accepted rotations
        init: "hosvd" (default), "identity" (Q = I) or an n x r orthonormal matrix
        reantisymmetrize_every: Project a_k back onto antisymmetric tensors
            after this many accepted rotations

    Returns:
        ApproximationResult with U = Q[:, :r] and the core projected from `a`;
        `metadata["gains"]` lists the predicted increase of f per rotation

    Raises:
        ParameterError: If eps is outside (0, 2/n)
    """
    a, n, d = prepare_input(a, r)
    eps = default_eps(n) if eps is None else float(eps)
    check_eps(eps, n)

    start = time.perf_counter()
    norm_a = a.norm()
    norm_sq = norm_a * norm_a
    state, init_label = _initial_state(a, n, r, eps, init)
    pairs = pivot_pairs(n, r)
    logger.info("jacobi start: n=%d d=%d r=%d eps=%.3g init=%s", n, d, r, eps, init_label)

    f = state.objective()
    g, gnorm = jacobi_gradient(state.a_k, r)
    state.trace.append(0, objective=math.sqrt(f), error=projection_error(norm_sq, math.sqrt(f)),
                       gradnorm=gnorm)

    status: Optional[SolverStatus] = None
    if not pairs or gnorm <= grad_tol:
        status = SolverStatus.CONVERGED
    misses = 0
    checked = 0
    while status is None:
        if state.accepted >= max_pivots:
            status = SolverStatus.MAX_ITERATIONS
            break
        i, j = pairs[state.cursor]
        state.cursor = (state.cursor + 1) % len(pairs)
        checked += 1
        if state.cursor == 0:
            logger.debug("jacobi sweep done: f=%.15e %s", f, state.invariant_drift(norm_a))
        if abs(g[i, j - r]) < eps * gnorm:
            misses += 1
            if misses >= len(pairs):
                status = SolverStatus.STAGNATED
            continue
        misses = 0

        alpha1, alpha2, alpha3 = state.alphas(i, j)
        phi = optimal_angle(alpha1, alpha2, alpha3)
        state.gains.append(d * (angle_objective(phi, alpha1, alpha2, alpha3) - alpha1))
        state.rotate(i, j, phi)
        state.accepted += 1
        if reantisymmetrize_every and state.accepted % reantisymmetrize_every == 0:
            state.a_k = antisymmetrize(state.a_k).copy_data()

        f = state.objective()
        g, gnorm = jacobi_gradient(state.a_k, r)
        state.trace.append(
            state.accepted,
            objective=math.sqrt(f),
            error=projection_error(norm_sq, math.sqrt(f)),
            gradnorm=gnorm,
            pivot=(i, j),
        )
        if gnorm <= grad_tol:
            status = SolverStatus.CONVERGED

    state.trace.termination = status
    approx = TuckerApprox.from_projection(a, state.q[:, :r])
    logger.info(
        "jacobi done: status=%s rotations=%d checked=%d error=%.6e (%.3fs)",
        status.value, state.accepted, checked, approx.error, time.perf_counter() - start,
    )
    return ApproximationResult(
        approx=approx,
        trace=state.trace,
        status=status,
        solver="jacobi",
        iterations=state.accepted,
        gradient_norm=gnorm,
        metadata={
            "init": init_label,
            "eps": eps,
            "pivots_checked": checked,
            "gains": state.gains,
            "antisymmetric": is_antisymmetric(state.a_k, 1e-12 * max(1.0, norm_a)),
            "wall_time": time.perf_counter() - start,
        },
    )


class JacobiSolver(BaseSolver):
    """Solver wrapper around `jacobi`.

    Options:
        eps or eps_factor (eps = eps_factor / n), grad_tol, max_pivots, init,
        reantisymmetrize_every
    """

    @property
    def solver_name(self) -> str:
        return "jacobi"

    def solve(self, a: ArrayLike, rank: int, **options) -> ApproximationResult:
        opts = self.merged_options(options)
        eps_factor = opts.pop("eps_factor", None)
        if opts.get("eps") is None and eps_factor is not None:
            opts["eps"] = default_eps(_as_array(a).shape[0], eps_factor)
        return jacobi(a, rank, **opts)
