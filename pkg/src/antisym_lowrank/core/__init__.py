"""Core module initialization."""

from antisym_lowrank.core.approximator import Approximator, create_default_approximator
from antisym_lowrank.core.base import (
    AntisymError,
    ApproximationResult,
    BaseSolver,
    ConvergenceError,
    InitStrategy,
    InvalidShapeError,
    ParameterError,
    RankError,
    SolverStatus,
    StructureError,
    TensorFormatError,
)
from antisym_lowrank.core.linalg import (
    SvdResult,
    SymEigResult,
    orthonormal_completion,
    singular_values,
    svd_leading,
    sym_eig,
)
from antisym_lowrank.core.rank import (
    RankReport,
    admissible_rank,
    attainable_ranks,
    construct_rank_d,
    construct_rank_n,
    multilinear_rank,
    multilinear_ranks,
)
from antisym_lowrank.core.results import ConvergenceTrace, Rank1Result, TraceRecord, TuckerApprox
from antisym_lowrank.core.tensor import (
    DenseTensor,
    Matricization,
    Rotation,
    antisymmetrize,
    apply_rotation,
    fold,
    is_antisymmetric,
    matricize,
    matricize_12,
    mode_product,
    multi_mode_product,
)

__all__ = [
    # Tensors
    "DenseTensor",
    "Matricization",
    "Rotation",
    "antisymmetrize",
    "is_antisymmetric",
    "matricize",
    "fold",
    "matricize_12",
    "mode_product",
    "multi_mode_product",
    "apply_rotation",
    # Linear algebra
    "SvdResult",
    "SymEigResult",
    "svd_leading",
    "singular_values",
    "sym_eig",
    "orthonormal_completion",
    # Rank analysis
    "RankReport",
    "multilinear_rank",
    "multilinear_ranks",
    "construct_rank_d",
    "construct_rank_n",
    "admissible_rank",
    "attainable_ranks",
    # Results and solvers
    "TuckerApprox",
    "TraceRecord",
    "ConvergenceTrace",
    "Rank1Result",
    "ApproximationResult",
    "SolverStatus",
    "InitStrategy",
    "BaseSolver",
    "Approximator",
    "create_default_approximator",
    # Errors
    "AntisymError",
    "InvalidShapeError",
    "TensorFormatError",
    "StructureError",
    "RankError",
    "ParameterError",
    "ConvergenceError",
]
