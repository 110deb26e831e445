"""Experiment tensor families and the antisymmetric ground-state solver."""

from antisym_lowrank.problems.generators import (
    exact_rank_antisymmetric,
    function_grid,
    function_tensor,
    random_antisymmetric,
    slater_tensor,
)
from antisym_lowrank.problems.hamiltonian import (
    GroundState,
    HamiltonianSpec,
    antisym_ground_state,
    from_orbit_coordinates,
    hamiltonian_apply,
    orbit_coordinates,
    potential,
)

__all__ = [
    "random_antisymmetric",
    "function_grid",
    "function_tensor",
    "slater_tensor",
    "exact_rank_antisymmetric",
    "HamiltonianSpec",
    "GroundState",
    "potential",
    "hamiltonian_apply",
    "orbit_coordinates",
    "from_orbit_coordinates",
    "antisym_ground_state",
]
