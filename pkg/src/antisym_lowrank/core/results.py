"""Approximation result types.

This module provides the value types returned by the approximation
algorithms: the antisymmetric Tucker approximation, the per-iteration
convergence trace and the rank-1 result of the power method.

Usage:
    from antisym_lowrank.core.results import TuckerApprox, ConvergenceTrace

    approx = TuckerApprox.from_projection(a, u)
    print(approx.error, approx.objective)

    trace = ConvergenceTrace()
    trace.append(0, objective=approx.objective, error=approx.error, gradnorm=1e-3)
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Optional, Tuple

import numpy as np

from antisym_lowrank.core.base import SolverStatus
from antisym_lowrank.core.tensor import (
    DenseTensor,
    frobenius_norm,
    is_antisymmetric,
    tucker_expand,
    tucker_project,
)

TRACE_COLUMNS: Tuple[str, ...] = (
    "iteration",
    "objective",
    "error",
    "gradnorm",
    "pivot_i",
    "pivot_j",
)


@dataclass
class TuckerApprox:
    """Antisymmetric Tucker approximation S x_0 U x_1 U ... x_{d-1} U.

    Attributes:
        factor: n x r matrix with orthonormal columns (U)
        core: r^d antisymmetric core tensor (S)
        objective: ||S||
        error: ||A - S x_0 U ... x_{d-1} U||

    Example:
        >>> approx = TuckerApprox.from_projection(a, u)
        >>> approx.reconstruct().dims == a.dims
        True
    """

    factor: np.ndarray
    core: DenseTensor
    objective: float
    error: float

    @classmethod
    def from_projection(cls, a: DenseTensor, u: np.ndarray) -> "TuckerApprox":
        """
        Project `a` onto the subspace spanned by `u` in every mode.

        The core is A x_0 U^T ... x_{d-1} U^T and the error is evaluated by
        explicit reconstruction.
        """
        u = np.asarray(u, dtype=np.float64)
        core = tucker_project(a, u)
        error = frobenius_norm(a.data - tucker_expand(core, u).data)
        return cls(factor=u, core=core, objective=core.norm(), error=error)

    @property
    def rank(self) -> int:
        return self.factor.shape[1]

    @property
    def order(self) -> int:
        return self.core.order

    @property
    def n(self) -> int:
        return self.factor.shape[0]

    def reconstruct(self) -> DenseTensor:
        """Full n^d tensor represented by this approximation."""
        return tucker_expand(self.core, self.factor)

    def is_antisymmetric(self, tol: Optional[float] = None) -> bool:
        """Check the core for antisymmetry (the reconstruction inherits it)."""
        return is_antisymmetric(self.core, tol)

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for serialization."""
        return {
            "n": self.n,
            "d": self.order,
            "rank": self.rank,
            "objective": self.objective,
            "error": self.error,
            "factor": self.factor.tolist(),
        }


@dataclass
class TraceRecord:
    """One iteration of a solver run; pivots are set for Jacobi only."""

    iteration: int
    objective: float
    error: float
    gradnorm: float
    pivot_i: Optional[int] = None
    pivot_j: Optional[int] = None

    def as_row(self) -> List[Any]:
        return [
            self.iteration,
            self.objective,
            self.error,
            self.gradnorm,
            "" if self.pivot_i is None else self.pivot_i,
            "" if self.pivot_j is None else self.pivot_j,
        ]


@dataclass
class ConvergenceTrace:
    """Per-iteration record of objective, error and gradient norm.

    Attributes:
        records: Trace rows in iteration order
        termination: Status the run ended with, set by the solver
    """

    records: List[TraceRecord] = field(default_factory=list)
    termination: Optional[SolverStatus] = None

    def append(
        self,
        iteration: int,
        objective: float,
        error: float,
        gradnorm: float,
        pivot: Optional[Tuple[int, int]] = None,
    ) -> TraceRecord:
        record = TraceRecord(
            iteration=iteration,
            objective=float(objective),
            error=float(error),
            gradnorm=float(gradnorm),
            pivot_i=None if pivot is None else int(pivot[0]),
            pivot_j=None if pivot is None else int(pivot[1]),
        )
        self.records.append(record)
        return record

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[TraceRecord]:
        return iter(self.records)

    @property
    def last(self) -> Optional[TraceRecord]:
        return self.records[-1] if self.records else None

    @property
    def objectives(self) -> np.ndarray:
        return np.array([r.objective for r in self.records])

    @property
    def errors(self) -> np.ndarray:
        return np.array([r.error for r in self.records])

    @property
    def gradnorms(self) -> np.ndarray:
        return np.array([r.gradnorm for r in self.records])

    def is_nondecreasing(self, slack: float = 1e-12) -> bool:
        """True if no objective drops by more than slack * max(1, |previous|)."""
        obj = self.objectives
        if obj.size < 2:
            return True
        drops = obj[:-1] - obj[1:]
        return bool(np.all(drops <= slack * np.maximum(1.0, np.abs(obj[:-1]))))

    def rows(self) -> List[List[Any]]:
        return [r.as_row() for r in self.records]


@dataclass
class Rank1Result:
    """Rank-1 approximation alpha * u_0 (x) ... (x) u_{d-1} from the power method.

    Attributes:
        alpha: A x_0 u_0^T ... x_{d-1} u_{d-1}^T at the returned vectors
        vectors: d unit vectors
        status: Termination status
        trace: Objective |alpha| per sweep
        iterations: Completed sweeps
        restarts: Number of perturbation restarts after a zero contraction
    """

    alpha: float
    vectors: List[np.ndarray]
    status: SolverStatus
    trace: ConvergenceTrace = field(default_factory=ConvergenceTrace)
    iterations: int = 0
    restarts: int = 0

    @property
    def converged(self) -> bool:
        return self.status.is_converged

    @property
    def factor(self) -> np.ndarray:
        """The vectors stacked as columns of an n x d matrix."""
        return np.column_stack(self.vectors)

    def orthonormality_defect(self) -> float:
        u = self.factor
        return float(np.linalg.norm(u.T @ u - np.eye(u.shape[1])))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "alpha": self.alpha,
            "status": self.status.value,
            "iterations": self.iterations,
            "restarts": self.restarts,
            "vectors": [v.tolist() for v in self.vectors],
        }
