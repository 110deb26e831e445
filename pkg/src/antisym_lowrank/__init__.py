"""antisym-lowrank - low multilinear rank approximation of antisymmetric tensors."""

__version__ = "0.1.0"

# Core
from antisym_lowrank.core import (
    AntisymError,
    ApproximationResult,
    Approximator,
    ConvergenceTrace,
    DenseTensor,
    SolverStatus,
    TuckerApprox,
    admissible_rank,
    antisymmetrize,
    attainable_ranks,
    create_default_approximator,
    is_antisymmetric,
    multilinear_rank,
)

# Solvers
from antisym_lowrank.solvers import (
    HooiSolver,
    HosvdSolver,
    JacobiSolver,
    RankDSolver,
    hooi,
    hopm,
    jacobi,
    rank1_to_antisymmetric,
    thosvd,
)

# Problems
from antisym_lowrank.problems import (
    HamiltonianSpec,
    antisym_ground_state,
    function_tensor,
    random_antisymmetric,
)

__all__ = [
    "__version__",
    # Core
    "DenseTensor",
    "antisymmetrize",
    "is_antisymmetric",
    "multilinear_rank",
    "admissible_rank",
    "attainable_ranks",
    "TuckerApprox",
    "ConvergenceTrace",
    "ApproximationResult",
    "SolverStatus",
    "Approximator",
    "create_default_approximator",
    "AntisymError",
    # Solvers
    "thosvd",
    "hooi",
    "jacobi",
    "hopm",
    "rank1_to_antisymmetric",
    "HosvdSolver",
    "HooiSolver",
    "JacobiSolver",
    "RankDSolver",
    # Problems
    "random_antisymmetric",
    "function_tensor",
    "HamiltonianSpec",
    "antisym_ground_state",
]
