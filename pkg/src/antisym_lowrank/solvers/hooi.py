"""Higher-order orthogonal iteration with antisymmetrizing post-processing.

HOOI updates one mode factor at a time and does not keep the factors equal,
so the final step picks the single factor U_mu whose shared-factor Tucker
projection has the largest core norm and uses it for every mode. The
starting factor competes in that pick, so the result is never worse than
the initialization.

With `orthogonalize_modes=True` each update is restricted to the orthogonal
complement of the other factors; the mutually orthogonal U_0..U_{d-1} then
stack into an antisymmetric approximation of rank r_0 + ... + r_{d-1}.
"""

import logging
import time
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from antisym_lowrank.core.base import (
    ApproximationResult,
    BaseSolver,
    InitStrategy,
    InvalidShapeError,
    ParameterError,
    RankError,
    SolverStatus,
)
from antisym_lowrank.core.linalg import svd_leading
from antisym_lowrank.core.results import ConvergenceTrace, TuckerApprox
from antisym_lowrank.core.tensor import ArrayLike, DenseTensor, multi_mode_product
from antisym_lowrank.solvers.common import (
    InitSpec,
    check_orthonormal,
    hosvd_factor,
    prepare_input,
    projection_error,
)
from antisym_lowrank.solvers.gradients import hooi_gradient, partial_contraction
from antisym_lowrank.solvers.hopm import stack_factors

logger = logging.getLogger(__name__)


def tucker_objective(a: ArrayLike, factors: Sequence[np.ndarray]) -> float:
    """||A x_0 U_0^T ... x_{d-1} U_{d-1}^T||."""
    return multi_mode_product(a, list(factors), transpose=True).norm()


def _mode_update(
    a: DenseTensor,
    factors: List[np.ndarray],
    mu: int,
    r_mu: int,
    orthogonalize_modes: bool,
) -> Tuple[np.ndarray, float]:
    m = partial_contraction(a, factors, mu)
    if orthogonalize_modes:
        others = np.column_stack([f for nu, f in enumerate(factors) if nu != mu])
        m = m - others @ (others.T @ m)
    u = svd_leading(m, r_mu).u
    return u, float(np.linalg.norm(u.T @ m))


def hooi_sweep(
    a: ArrayLike,
    factors: Sequence[np.ndarray],
    orthogonalize_modes: bool = False,
) -> Tuple[List[np.ndarray], List[float]]:
    """
    One alternating sweep over all modes.

    Args:
        a: Tensor of order d
        factors: d factors with orthonormal columns (rank taken from each)
        orthogonalize_modes: Restrict each update to the complement of the others

    Returns:
        (updated factors, objective after each single-mode update)
    """
    a = a if isinstance(a, DenseTensor) else DenseTensor(a)
    factors = [np.asarray(f, dtype=np.float64) for f in factors]
    if len(factors) != a.order:
        raise InvalidShapeError(f"expected {a.order} factors, got {len(factors)}")
    values = []
    for mu in range(a.order):
        factors[mu], value = _mode_update(a, factors, mu, factors[mu].shape[1], orthogonalize_modes)
        values.append(value)
    return factors, values


def _initial_factors(
    a: DenseTensor,
    ranks: Sequence[int],
    init: Union[InitSpec, Sequence[np.ndarray]],
    orthogonalize_modes: bool,
) -> Tuple[List[np.ndarray], str]:
    n, d = a.dims[0], a.order
    if isinstance(init, (list, tuple)):
        return [check_orthonormal(u, n, r) for u, r in zip(init, ranks)], "explicit"
    total = sum(ranks) if orthogonalize_modes else ranks[0]
    if isinstance(init, np.ndarray):
        base, label = check_orthonormal(init, n, total), "explicit"
    else:
        strategy = InitStrategy.parse(init)
        if strategy in (InitStrategy.HOSVD, InitStrategy.AUTO):
            base, label = hosvd_factor(a, total), InitStrategy.HOSVD.value
        elif strategy is InitStrategy.IDENTITY:
            base, label = np.eye(n)[:, :total], InitStrategy.IDENTITY.value
        else:
            raise ParameterError(f"init '{strategy.value}' is not available for hooi")
    if not orthogonalize_modes:
        return [base.copy() for _ in range(d)], label
    offsets = np.cumsum([0] + list(ranks))
    return [base[:, offsets[mu]:offsets[mu + 1]].copy() for mu in range(d)], label


def _distinct(factors: Sequence[np.ndarray]) -> List[np.ndarray]:
    out: List[np.ndarray] = []
    for f in factors:
        if not any(np.array_equal(f, g) for g in out):
            out.append(f)
    return out


def hooi(
    a: ArrayLike,
    r: int,
    max_iters: int = 1000,
    grad_tol: float = 1e-10,
    init: Union[InitSpec, Sequence[np.ndarray]] = "hosvd",
    stagnation_tol: float = 1e-14,
    orthogonalize_modes: bool = False,
    ranks: Optional[Sequence[int]] = None,
) -> ApproximationResult:
    """
    HOOI for a multilinear rank-(r, ..., r) approximation.

    Args:
        a: Antisymmetric tensor
        r: Target rank (per mode)
        max_iters: Sweep cap
        grad_tol: Stop when the Riemannian gradient norm is at most grad_tol
        init: "hosvd" (default), "identity" ([I_r; 0]), an n x r orthonormal
            matrix, or a list of d per-mode factors
        stagnation_tol: Stop with status stagnated when the relative change of
            the squared objective over a sweep falls below this value
        orthogonalize_modes: Keep the factors mutually orthogonal and return
            the stacked rank-(r_0 + ... + r_{d-1}) approximation
        ranks: Per-mode ranks for `orthogonalize_modes` (default r for every mode)

    Returns:
        ApproximationResult with the unstructured factors in `factors` and the
        antisymmetrized approximation in `approx`. `metadata["chosen_mode"]` is
        the mode whose factor was used, or None when the initial factor was
        kept (`metadata["kept_initial"]`) or the factors were stacked.
    """
    a, n, d = prepare_input(a, r)
    ranks = list(ranks) if ranks is not None else [r] * d
    if len(ranks) != d or any(not (1 <= rk <= n) for rk in ranks):
        raise RankError(f"per-mode ranks {ranks} invalid for n={n}, d={d}")
    if orthogonalize_modes and sum(ranks) > n:
        raise RankError(f"stacked rank {sum(ranks)} exceeds n={n}")

    start = time.perf_counter()
    norm_sq = a.norm() ** 2
    factors, init_label = _initial_factors(a, ranks, init, orthogonalize_modes)
    initial = [f.copy() for f in factors]
    trace = ConvergenceTrace()
    objective = tucker_objective(a, factors)
    grad = hooi_gradient(a, factors, orthogonalize_modes)
    trace.append(0, objective=objective, error=projection_error(norm_sq, objective), gradnorm=grad)
    logger.info("hooi start: n=%d d=%d r=%s init=%s", n, d, ranks, init_label)

    status = SolverStatus.CONVERGED if grad <= grad_tol else SolverStatus.MAX_ITERATIONS
    sweeps = 0
    while status is SolverStatus.MAX_ITERATIONS and sweeps < max_iters:
        previous = objective
        factors, _ = hooi_sweep(a, factors, orthogonalize_modes)
        sweeps += 1
        objective = tucker_objective(a, factors)
        grad = hooi_gradient(a, factors, orthogonalize_modes)
        trace.append(
            sweeps, objective=objective, error=projection_error(norm_sq, objective), gradnorm=grad
        )
        logger.debug("hooi sweep %d: objective=%.15e grad=%.3e", sweeps, objective, grad)
        if grad <= grad_tol:
            status = SolverStatus.CONVERGED
        elif abs(objective ** 2 - previous ** 2) < stagnation_tol * max(previous ** 2, 1e-300):
            status = SolverStatus.STAGNATED

    trace.termination = status
    chosen: Optional[int] = None
    kept_initial = False
    if orthogonalize_modes:
        approx = stack_factors(a, factors)
    else:
        candidates = [TuckerApprox.from_projection(a, u) for u in factors]
        chosen = int(np.argmax([c.objective for c in candidates]))
        approx = candidates[chosen]
        for u in _distinct(initial):
            start_approx = TuckerApprox.from_projection(a, u)
            if start_approx.objective > approx.objective:
                approx, chosen, kept_initial = start_approx, None, True
        if kept_initial:
            logger.info("hooi: final mode factors do not beat the initial factor, keeping it")
    logger.info(
        "hooi done: status=%s sweeps=%d error=%.6e (%.3fs)",
        status.value, sweeps, approx.error, time.perf_counter() - start,
    )
    return ApproximationResult(
        approx=approx,
        trace=trace,
        status=status,
        solver="hooi",
        iterations=sweeps,
        gradient_norm=grad,
        factors=factors,
        metadata={
            "init": init_label,
            "chosen_mode": chosen,
            "kept_initial": kept_initial,
            "unstructured_error": projection_error(norm_sq, objective),
            "wall_time": time.perf_counter() - start,
        },
    )


class HooiSolver(BaseSolver):
    """Solver wrapper around `hooi`.

    Options:
        max_iters, grad_tol, init, stagnation_tol, orthogonalize_modes, ranks
    """

    @property
    def solver_name(self) -> str:
        return "hooi"

    def solve(self, a: ArrayLike, rank: int, **options) -> ApproximationResult:
        return hooi(a, rank, **self.merged_options(options))

