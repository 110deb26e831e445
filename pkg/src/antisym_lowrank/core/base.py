"""Base classes, status enums and exceptions for approximation solvers."""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence

import numpy as np


class SolverStatus(Enum):
    """Termination status of an iterative solver."""

    CONVERGED = "converged"
    MAX_ITERATIONS = "max_iterations"
    STAGNATED = "stagnated"
    DEGENERATE = "degenerate"
    FAILED = "failed"

    @property
    def is_converged(self) -> bool:
        return self is SolverStatus.CONVERGED


class InitStrategy(Enum):
    """Initial factor choices shared by the solvers."""

    HOSVD = "hosvd"
    IDENTITY = "identity"
    KOFIDIS = "kofidis"
    AUTO = "auto"

    @classmethod
    def parse(cls, value: Any) -> "InitStrategy":
        """Accept an enum member or its string value ("hosvd", "identity", ...)."""
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ParameterError(
                f"unknown init strategy '{value}'. "
                f"Available: {[s.value for s in cls]}"
            ) from None


@dataclass
class ApproximationResult:
    """Standard result returned by every solver.

    Attributes:
        approx: Antisymmetric Tucker approximation (TuckerApprox)
        trace: Per-iteration convergence record (ConvergenceTrace)
        status: Termination status
        solver: Name of the solver that produced the result
        iterations: Sweeps (HOOI, HOPM) or accepted rotations (Jacobi)
        gradient_norm: Gradient norm at the returned point
        factors: Unstructured per-mode factors (HOOI only)
        metadata: Solver-specific extras (init used, restarts, alpha, ...)
    """

    approx: Any
    trace: Any
    status: SolverStatus
    solver: str
    iterations: int = 0
    gradient_norm: float = 0.0
    factors: Optional[List[np.ndarray]] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def converged(self) -> bool:
        return self.status.is_converged

    @property
    def error(self) -> float:
        return self.approx.error

    def to_dict(self) -> Dict[str, Any]:
        """Convert to a JSON-friendly dictionary (factor matrices as nested lists)."""
        return {
            "solver": self.solver,
            "status": self.status.value,
            "iterations": self.iterations,
            "gradient_norm": self.gradient_norm,
            "approximation": self.approx.to_dict(),
            "metadata": self.metadata,
        }


class BaseSolver(ABC):
    """Base class for all low multilinear rank approximation solvers.

    Subclasses implement `solve()` and `solver_name`; `validate_request()`
    reports problems with a request without raising.
    """

    def __init__(self, **options):
        """
        Initialize the solver.

        Args:
            **options: Solver-specific defaults, overridable per `solve()` call
        """
        self.options = options

    @abstractmethod
    def solve(self, a, rank: int, **options) -> ApproximationResult:
        """
        Approximate an antisymmetric tensor.

        Args:
            a: Antisymmetric DenseTensor
            rank: Target multilinear rank
            **options: Per-call overrides of the solver options

        Returns:
            ApproximationResult with the approximation and its trace
        """
        pass

    @property
    @abstractmethod
    def solver_name(self) -> str:
        """Get the name of this solver."""
        pass

    def supported_ranks(self, n: int, d: int) -> Sequence[int]:
        """Ranks this solver accepts for an n^d tensor. Default: 1..n."""
        return range(1, n + 1)

    def validate_request(self, a, rank: int) -> List[str]:
        """
        Check a request against the solver's capabilities.

        Args:
            a: Tensor to approximate
            rank: Target multilinear rank

        Returns:
            List of error messages (empty if valid)
        """
        from antisym_lowrank.core.tensor import is_antisymmetric

        errors = []
        dims = a.dims
        if len(set(dims)) != 1:
            errors.append(f"tensor must have equal dimensions, got {dims}")
            return errors
        n, d = dims[0], len(dims)
        if not is_antisymmetric(a):
            errors.append("tensor is not antisymmetric")
        if rank not in self.supported_ranks(n, d):
            errors.append(
                f"rank {rank} not supported by {self.solver_name} for n={n}, d={d}"
            )
        return errors

    def merged_options(self, overrides: Dict[str, Any]) -> Dict[str, Any]:
        merged = dict(self.options)
        merged.update({k: v for k, v in overrides.items() if v is not None})
        return merged


class AntisymError(Exception):
    """Base exception for the package."""

    pass


class InvalidShapeError(AntisymError):
    """Raised on dimension mismatch, wrong order or mode out of range."""

    pass


class TensorFormatError(InvalidShapeError):
    """Raised when a tensor text file cannot be parsed."""

    pass


class StructureError(AntisymError):
    """Raised when an input lacks required structure (antisymmetry, symmetry, orthonormality)."""

    pass


class RankError(AntisymError):
    """Raised when a target rank is out of range."""

    pass


class ParameterError(AntisymError):
    """Raised for out-of-range solver parameters."""

    pass


class ConvergenceError(AntisymError):
    """Raised when an eigensolver fails within its iteration cap."""

    pass
