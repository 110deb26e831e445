"""Multilinear rank-d approximation through the higher-order power method.

For an antisymmetric order-d tensor the best antisymmetric rank-d
approximation follows from the best rank-1 approximation: the d HOPM
vectors are mutually orthonormal, and projecting onto their span gives a
core of the form antisym(beta * e_0 (x) ... (x) e_{d-1}).

Usage:
    from antisym_lowrank.solvers.hopm import hopm, rank1_to_antisymmetric

    r1 = hopm(a)                       # kofidis init for d = 4, HOSVD otherwise
    approx = rank1_to_antisymmetric(a, r1)
"""

import logging
import time
import warnings
from typing import List, Optional, Sequence, Union

import numpy as np

from antisym_lowrank.core.base import (
    ApproximationResult,
    BaseSolver,
    InitStrategy,
    InvalidShapeError,
    ParameterError,
    RankError,
    SolverStatus,
    StructureError,
)
from antisym_lowrank.core.linalg import (
    orthonormality_defect,
    reorthonormalize,
    svd_leading,
    sym_eig,
)
from antisym_lowrank.core.results import ConvergenceTrace, Rank1Result, TuckerApprox
from antisym_lowrank.core.tensor import (
    ArrayLike,
    DenseTensor,
    contract_except,
    is_antisymmetric,
    matricize_12,
    multilinear_form,
    tucker_project,
)
from antisym_lowrank.solvers.common import as_tensor, hosvd_factor, projection_error
from antisym_lowrank.solvers.gradients import hopm_gradient

logger = logging.getLogger(__name__)

HopmInit = Union[str, InitStrategy, Sequence[np.ndarray], np.ndarray]

MAX_RESTARTS = 3
RESTART_NOISE = 1e-8
ORTHONORMAL_DRIFT_TOL = 1e-8


def kofidis_init_d4(a: ArrayLike) -> List[np.ndarray]:
    """
    Initial vectors for HOPM on an antisymmetric order-4 tensor.

    Takes the eigenvector v of the symmetric (0,1)-matricization with the
    largest |eigenvalue|, reshapes it to the n x n matrix V (skew-symmetric)
    and returns the 4 leading left singular vectors of V.

    Raises:
        InvalidShapeError: If a is not of order 4
        StructureError: If a is zero or not antisymmetric
    """
    a = as_tensor(a)
    if a.order != 4:
        raise InvalidShapeError(f"kofidis init needs order 4, got {a.order}")
    if not is_antisymmetric(a):
        raise StructureError("kofidis init needs an antisymmetric tensor")
    if a.norm() == 0.0:
        raise StructureError("kofidis init is undefined for the zero tensor")
    n = a.dims[0]
    eig = sym_eig(matricize_12(a).matrix)
    v = np.reshape(eig.vectors[:, 0], (n, n), order="F")
    logger.debug("kofidis init: leading eigenvalue %.6e", eig.values[0])
    u = svd_leading(v, 4).u
    return [u[:, k].copy() for k in range(4)]


def _initial_vectors(a: DenseTensor, init: HopmInit) -> tuple:
    n, d = a.dims[0], a.order
    if not isinstance(init, (str, InitStrategy)):
        if isinstance(init, np.ndarray) and init.ndim == 2:
            vectors = [init[:, k].astype(np.float64) for k in range(init.shape[1])]
        else:
            vectors = [np.asarray(v, dtype=np.float64) for v in init]
        if len(vectors) != d or any(v.shape != (n,) for v in vectors):
            raise InvalidShapeError(f"explicit init needs {d} vectors of length {n}")
        if min(np.linalg.norm(v) for v in vectors) == 0.0:
            raise ParameterError("explicit init vectors must be nonzero")
        # Gram-Schmidt in the given order; the sweep keeps the set orthonormal.
        u = reorthonormalize(np.column_stack(vectors))
        return [u[:, k].copy() for k in range(d)], "explicit"

    strategy = InitStrategy.parse(init)
    if strategy is InitStrategy.AUTO:
        strategy = InitStrategy.KOFIDIS if d == 4 else InitStrategy.HOSVD
    if strategy is InitStrategy.KOFIDIS:
        if d != 4:
            raise ParameterError(f"kofidis init is defined for d = 4 only, got d={d}")
        return kofidis_init_d4(a), strategy.value
    if strategy is InitStrategy.HOSVD:
        u = hosvd_factor(a, d)
        return [u[:, k].copy() for k in range(d)], strategy.value
    raise ParameterError(f"init '{strategy.value}' is not available for hopm")


def _orthogonalize_against(u: np.ndarray, others: Sequence[np.ndarray]) -> np.ndarray:
    # Modified Gram-Schmidt, one projection at a time.
    for w in others:
        u = u - float(w @ u) * w
    return u / np.linalg.norm(u)


def _rank_d_error(a: DenseTensor, vectors: Sequence[np.ndarray], norm_sq: float) -> float:
    u = reorthonormalize(np.column_stack(vectors))
    return projection_error(norm_sq, tucker_project(a, u).norm())


def hopm(
    a: ArrayLike,
    init: HopmInit = "auto",
    tol: float = 1e-10,
    max_iters: int = 1000,
    seed: Optional[int] = 0,
) -> Rank1Result:
    """
    Higher-order power method for the best rank-1 approximation.

    Each update sets u_mu = v_mu / ||v_mu|| with v_mu = A x_{nu != mu} u_nu^T
    and re-orthogonalizes u_mu against the other current vectors, so the d
    vectors are orthonormal after the first sweep even from a non-orthogonal
    start.

    Args:
        a: Antisymmetric tensor with n >= d
        init: "auto" (kofidis for d = 4, HOSVD otherwise), "hosvd", "kofidis",
            or d explicit vectors
        tol: Stop when the rank-1 gradient norm is at most tol
        max_iters: Sweep cap
        seed: Seed for the perturbation used after a zero contraction

    Returns:
        Rank1Result; the trace objective is |alpha| and the trace error is the
        error of the induced antisymmetric rank-d approximation
    """
    a = as_tensor(a)
    if a.order < 2 or not a.is_cubical:
        raise InvalidShapeError(f"expected a cubical tensor of order >= 2, got dims {a.dims}")
    if not is_antisymmetric(a):
        raise StructureError("input tensor is not antisymmetric")
    n, d = a.dims[0], a.order
    norm_a = a.norm()
    norm_sq = norm_a * norm_a
    trace = ConvergenceTrace()

    if n < d or norm_a == 0.0:
        vectors = [np.eye(n)[:, k % n] for k in range(d)]
        trace.append(0, objective=0.0, error=norm_a, gradnorm=0.0)
        trace.termination = SolverStatus.DEGENERATE
        logger.info("hopm: zero tensor (n=%d, d=%d), alpha = 0", n, d)
        return Rank1Result(alpha=0.0, vectors=vectors, status=SolverStatus.DEGENERATE, trace=trace)

    vectors, init_label = _initial_vectors(a, init)
    rng = np.random.default_rng(seed)
    alpha = multilinear_form(a, vectors)
    grad = hopm_gradient(a, vectors)
    trace.append(0, objective=abs(alpha), error=_rank_d_error(a, vectors, norm_sq), gradnorm=grad)
    logger.info("hopm start: n=%d d=%d init=%s |alpha|=%.6e", n, d, init_label, abs(alpha))

    status = SolverStatus.CONVERGED if grad <= tol else SolverStatus.MAX_ITERATIONS
    restarts = 0
    sweeps = 0
    tiny = 1e-14 * norm_a
    while status is SolverStatus.MAX_ITERATIONS and sweeps < max_iters:
        for mu in range(d):
            v = contract_except(a, vectors, mu)
            if np.linalg.norm(v) <= tiny:
                restarts += 1
                if restarts > MAX_RESTARTS:
                    status = SolverStatus.FAILED
                    break
                msg = f"hopm: zero contraction in mode {mu}, restart {restarts} with perturbation"
                warnings.warn(msg, RuntimeWarning, stacklevel=2)
                logger.warning(msg)
                v = rng.uniform(-1.0, 1.0, n) * (RESTART_NOISE * norm_a)
            others = [vectors[nu] for nu in range(d) if nu != mu]
            vectors[mu] = _orthogonalize_against(v / np.linalg.norm(v), others)
        if status is SolverStatus.FAILED:
            break
        sweeps += 1
        alpha = multilinear_form(a, vectors)
        grad = hopm_gradient(a, vectors)
        trace.append(
            sweeps,
            objective=abs(alpha),
            error=_rank_d_error(a, vectors, norm_sq),
            gradnorm=grad,
        )
        logger.debug("hopm sweep %d: |alpha|=%.15e grad=%.3e", sweeps, abs(alpha), grad)
        if grad <= tol:
            status = SolverStatus.CONVERGED

    trace.termination = status
    logger.info("hopm done: status=%s sweeps=%d |alpha|=%.6e", status.value, sweeps, abs(alpha))
    return Rank1Result(
        alpha=float(alpha),
        vectors=vectors,
        status=status,
        trace=trace,
        iterations=sweeps,
        restarts=restarts,
    )


def rank1_to_antisymmetric(a: ArrayLike, r1: Rank1Result) -> TuckerApprox:
    """
    Antisymmetric multilinear rank-d approximation from HOPM vectors.

    The factor is U = [u_0, ..., u_{d-1}] and the core is obtained by
    projection, S = A x_0 U^T ... x_{d-1} U^T.
    """
    a = as_tensor(a)
    u = r1.factor
    if orthonormality_defect(u) > ORTHONORMAL_DRIFT_TOL:
        msg = "rank-1 vectors are not orthonormal; re-orthonormalizing"
        warnings.warn(msg, RuntimeWarning, stacklevel=2)
        logger.warning(msg)
        u = reorthonormalize(u)
    return TuckerApprox.from_projection(a, u)


def stack_factors(a: ArrayLike, factors: Sequence[np.ndarray]) -> TuckerApprox:
    """
    Antisymmetric rank-(r_0 + ... + r_{d-1}) approximation from mutually
    orthogonal per-mode factors, using U = [U_0 | ... | U_{d-1}].

    Raises:
        RankError: If the stacked factor has more than n columns
        StructureError: If the columns deviate from orthonormality by more than 1e-8
    """
    a = as_tensor(a)
    u = np.column_stack([np.asarray(f, dtype=np.float64) for f in factors])
    if u.shape[1] > u.shape[0]:
        raise RankError(f"stacked factor has {u.shape[1]} columns for n={u.shape[0]}")
    defect = orthonormality_defect(u)
    if defect > ORTHONORMAL_DRIFT_TOL:
        raise StructureError(f"stacked factors are not orthonormal (defect {defect:.3e})")
    if defect > 1e-12:
        logger.debug("stack_factors: re-orthonormalizing (defect %.3e)", defect)
        u = reorthonormalize(u)
    return TuckerApprox.from_projection(a, u)


class RankDSolver(BaseSolver):
    """HOPM followed by the rank-1 to rank-d conversion.

    Options:
        init: "auto", "hosvd" or "kofidis"
        tol: Gradient tolerance (default 1e-10)
        max_iters: Sweep cap (default 1000)
        seed: Seed for restart perturbations
    """

    @property
    def solver_name(self) -> str:
        return "rankd"

    def supported_ranks(self, n: int, d: int) -> Sequence[int]:
        return [d] if n >= d else []

    def solve(self, a: ArrayLike, rank: Optional[int] = None, **options) -> ApproximationResult:
        a = as_tensor(a)
        if rank is not None and rank != a.order:
            raise RankError(f"rankd solver approximates with rank d={a.order}, got {rank}")
        if a.dims[0] < a.order:
            raise RankError(f"rank d={a.order} exceeds n={a.dims[0]}")
        opts = self.merged_options(options)
        start = time.perf_counter()
        r1 = hopm(
            a,
            init=opts.get("init", "auto"),
            tol=opts.get("tol", 1e-10),
            max_iters=opts.get("max_iters", 1000),
            seed=opts.get("seed", 0),
        )
        if r1.status is SolverStatus.DEGENERATE:
            approx = TuckerApprox.from_projection(a, r1.factor)
        else:
            approx = rank1_to_antisymmetric(a, r1)
        return ApproximationResult(
            approx=approx,
            trace=r1.trace,
            status=r1.status,
            solver=self.solver_name,
            iterations=r1.iterations,
            gradient_norm=r1.trace.last.gradnorm,
            metadata={
                "alpha": r1.alpha,
                "restarts": r1.restarts,
                "wall_time": time.perf_counter() - start,
            },
        )
