"""Approximation algorithms for antisymmetric tensors."""

from antisym_lowrank.solvers.gradients import hooi_gradient, hooi_gradient_components, hopm_gradient
from antisym_lowrank.solvers.hooi import HooiSolver, hooi, hooi_sweep, tucker_objective
from antisym_lowrank.solvers.hopm import (
    RankDSolver,
    hopm,
    kofidis_init_d4,
    rank1_to_antisymmetric,
    stack_factors,
)
from antisym_lowrank.solvers.hosvd import HosvdSolver, thosvd
from antisym_lowrank.solvers.jacobi import (
    JacobiSolver,
    JacobiState,
    angle_objective,
    jacobi,
    jacobi_gradient,
    optimal_angle,
    pivot_pairs,
)

__all__ = [
    "thosvd",
    "HosvdSolver",
    "hooi",
    "hooi_sweep",
    "tucker_objective",
    "HooiSolver",
    "jacobi",
    "jacobi_gradient",
    "optimal_angle",
    "angle_objective",
    "pivot_pairs",
    "JacobiState",
    "JacobiSolver",
    "hopm",
    "kofidis_init_d4",
    "rank1_to_antisymmetric",
    "stack_factors",
    "RankDSolver",
    "hooi_gradient",
    "hooi_gradient_components",
    "hopm_gradient",
]
