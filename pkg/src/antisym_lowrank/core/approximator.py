"""Solver registry and dispatch."""

import asyncio
import logging
from concurrent.futures import ThreadPoolExecutor
from functools import partial
from typing import Any, Dict, Optional, Union

from antisym_lowrank.core.base import ApproximationResult, BaseSolver, ParameterError
from antisym_lowrank.core.tensor import ArrayLike, DenseTensor

logger = logging.getLogger(__name__)


class Approximator:
    """Registry of approximation solvers with a default.

    Example:
        >>> approximator = Approximator()
        >>> approximator.add_solver("jacobi", JacobiSolver())
        >>> result = approximator.approximate(a, rank=6)
        >>> results = await approximator.approximate_parallel(
        ...     a, 6, {"hosvd": {}, "hooi": {}, "jacobi": {"eps_factor": 0.1}}
        ... )
    """

    def __init__(self, max_workers: Optional[int] = None):
        """
        Initialize an empty registry.

        Args:
            max_workers: Thread pool size for `approximate_parallel`
                (None lets the executor choose)
        """
        self.solvers: Dict[str, BaseSolver] = {}
        self._default_solver: Optional[str] = None
        self.max_workers = max_workers

    def add_solver(self, name: str, solver: BaseSolver) -> None:
        """
        Register a solver; the first one registered becomes the default.

        Args:
            name: Unique name for the solver
            solver: Instance of BaseSolver
        """
        self.solvers[name] = solver
        if self._default_solver is None:
            self._default_solver = name

    def remove_solver(self, name: str) -> None:
        if name in self.solvers:
            del self.solvers[name]
            if self._default_solver == name:
                self._default_solver = next(iter(self.solvers.keys()), None)

    def set_default_solver(self, name: str) -> None:
        """
        Set the default solver.

        Raises:
            ParameterError: If the solver is not registered
        """
        if name not in self.solvers:
            raise ParameterError(f"Solver '{name}' not found")
        self._default_solver = name

    def get_solver(self, name: Optional[str] = None) -> BaseSolver:
        """
        Get a solver by name or return the default.

        Raises:
            ParameterError: If the solver is not found or none is registered
        """
        if name is None:
            if self._default_solver is None:
                raise ParameterError("No solvers configured")
            return self.solvers[self._default_solver]
        if name not in self.solvers:
            raise ParameterError(
                f"Solver '{name}' not found. Available: {list(self.solvers.keys())}"
            )
        return self.solvers[name]

    def approximate(
        self,
        a: ArrayLike,
        rank: Optional[int] = None,
        solver: Optional[str] = None,
        **options,
    ) -> ApproximationResult:
        """
        Approximate a tensor with one solver.

        Args:
            a: Antisymmetric tensor
            rank: Target multilinear rank (rank-d solvers default to d)
            solver: Solver name (uses default if None)
            **options: Per-call solver options

        Returns:
            ApproximationResult

        Raises:
            ParameterError: If the request fails the solver's validation
        """
        a = a if isinstance(a, DenseTensor) else DenseTensor(a)
        instance = self.get_solver(solver)
        if rank is None:
            rank = a.order
        errors = instance.validate_request(a, rank)
        if errors:
            raise ParameterError(f"Invalid approximation request: {'; '.join(errors)}")
        logger.debug("dispatching %s (rank %d)", instance.solver_name, rank)
        return instance.solve(a, rank, **options)

    def list_solvers(self) -> Dict[str, Any]:
        """Registered solvers with their default options."""
        return {
            name: {"solver_name": s.solver_name, "options": dict(s.options)}
            for name, s in self.solvers.items()
        }

    async def approximate_parallel(
        self,
        a: ArrayLike,
        rank: Optional[int],
        solvers_config: Dict[str, Dict[str, Any]],
    ) -> Dict[str, Union[ApproximationResult, Exception]]:
        """
        Run several solvers on the same tensor concurrently.

        Each solver runs in a worker thread; failures are returned in place
        of the result instead of cancelling the others.

        Args:
            a: Antisymmetric tensor
            rank: Target rank shared by all solvers
            solvers_config: Solver name -> per-call options

        Returns:
            Solver name -> ApproximationResult or the raised exception
        """
        loop = asyncio.get_running_loop()
        with ThreadPoolExecutor(max_workers=self.max_workers) as pool:
            tasks = {
                name: loop.run_in_executor(
                    pool, partial(self.approximate, a, rank, name, **config)
                )
                for name, config in solvers_config.items()
            }
            results = await asyncio.gather(*tasks.values(), return_exceptions=True)
        return {name: result for name, result in zip(tasks.keys(), results)}


def create_default_approximator(
    solver_options: Optional[Dict[str, Dict[str, Any]]] = None,
    max_workers: Optional[int] = None,
) -> Approximator:
    """
    Approximator with hosvd (default), hooi, jacobi and rankd registered.

    Args:
        solver_options: Per-solver default options keyed by solver name
        max_workers: Thread pool size for parallel dispatch
    """
    from antisym_lowrank.solvers import HooiSolver, HosvdSolver, JacobiSolver, RankDSolver

    solver_options = solver_options or {}
    approximator = Approximator(max_workers=max_workers)
    registry = {
        "hosvd": HosvdSolver,
        "hooi": HooiSolver,
        "jacobi": JacobiSolver,
        "rankd": RankDSolver,
    }
    for name, cls in registry.items():
        approximator.add_solver(name, cls(**solver_options.get(name, {})))
    return approximator
