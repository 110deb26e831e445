"""Truncated HOSVD of antisymmetric tensors.

One SVD suffices: all matricizations of an antisymmetric tensor agree up to
sign, so the leading left singular vectors of A_(0) serve every mode and the
projected core is antisymmetric automatically.
"""

import logging
import time

from antisym_lowrank.core.base import ApproximationResult, BaseSolver, SolverStatus
from antisym_lowrank.core.results import ConvergenceTrace, TuckerApprox
from antisym_lowrank.core.tensor import ArrayLike
from antisym_lowrank.solvers.common import hosvd_factor, prepare_input
from antisym_lowrank.solvers.gradients import hooi_gradient

logger = logging.getLogger(__name__)


def thosvd(a: ArrayLike, r: int) -> TuckerApprox:
    """
    Truncated HOSVD with a shared factor.

    Args:
        a: Antisymmetric tensor with all dimensions equal to n
        r: Target multilinear rank, 1 <= r <= n

    Returns:
        TuckerApprox whose error is within a factor sqrt(d) of the best
        rank-r error

    Raises:
        StructureError: If a is not antisymmetric
        RankError: If r is out of range
    """
    a, n, d = prepare_input(a, r)
    u = hosvd_factor(a, r)
    approx = TuckerApprox.from_projection(a, u)
    logger.debug("thosvd n=%d d=%d r=%d error=%.6e", n, d, r, approx.error)
    return approx


class HosvdSolver(BaseSolver):
    """Solver wrapper around `thosvd`; the trace holds a single record."""

    @property
    def solver_name(self) -> str:
        return "hosvd"

    def solve(self, a: ArrayLike, rank: int, **options) -> ApproximationResult:
        start = time.perf_counter()
        approx = thosvd(a, rank)
        grad = hooi_gradient(a, [approx.factor] * approx.order)
        trace = ConvergenceTrace(termination=SolverStatus.CONVERGED)
        trace.append(0, objective=approx.objective, error=approx.error, gradnorm=grad)
        return ApproximationResult(
            approx=approx,
            trace=trace,
            status=SolverStatus.CONVERGED,
            solver=self.solver_name,
            iterations=0,
            gradient_norm=grad,
            metadata={"wall_time": time.perf_counter() - start},
        )
