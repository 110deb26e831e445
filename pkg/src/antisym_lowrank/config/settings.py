"""Settings and configuration management."""

from dataclasses import asdict, dataclass, field, fields
from typing import Any, Dict, List, Optional

FAMILIES = ("random-batch", "function", "groundstate")
ALGORITHMS = ("hosvd", "hooi", "jacobi", "rankd")
INITS = ("hosvd", "identity", "kofidis")


@dataclass
class SolverSettings:
    """Tolerances and iteration caps shared by the solvers."""

    grad_tol: float = 1e-10
    eps_factor: float = 0.1  # eps = eps_factor / n
    hooi_max_sweeps: int = 1000
    jacobi_max_pivots: int = 10000
    hopm_max_iters: int = 1000
    hopm_tol: float = 1e-10
    reantisymmetrize_every: int = 500
    stagnation_tol: float = 1e-14
    eig_tol: float = 1e-8

    @classmethod
    def from_dict(cls, config: Optional[Dict[str, Any]]) -> "SolverSettings":
        """
        Create SolverSettings from a dictionary, ignoring unknown keys.

        Args:
            config: Mapping of field name to value (None gives the defaults)
        """
        config = config or {}
        known = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in config.items() if k in known})

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def options_for(self, algorithm: str) -> Dict[str, Any]:
        """Keyword options for the named solver."""
        if algorithm == "hooi":
            return {
                "grad_tol": self.grad_tol,
                "max_iters": self.hooi_max_sweeps,
                "stagnation_tol": self.stagnation_tol,
            }
        if algorithm == "jacobi":
            return {
                "grad_tol": self.grad_tol,
                "eps_factor": self.eps_factor,
                "max_pivots": self.jacobi_max_pivots,
                "reantisymmetrize_every": self.reantisymmetrize_every,
            }
        if algorithm == "rankd":
            return {"tol": self.hopm_tol, "max_iters": self.hopm_max_iters}
        return {}


@dataclass
class ExperimentConfig:
    """Experiment run description.

    Trial t uses seed `seed_base + t`; ranks are ignored by the rankd
    algorithm, which always approximates with rank d.
    """

    family: str = "random-batch"
    algorithms: List[str] = field(default_factory=lambda: ["hosvd", "hooi", "jacobi"])
    inits: List[str] = field(default_factory=lambda: ["hosvd"])
    n: int = 10
    d: int = 3
    ranks: List[int] = field(default_factory=lambda: [3])
    trials: int = 1
    seed_base: int = 0
    c_v: float = 100.0
    c_w: float = 5.0
    output_dir: str = "results"
    threads: int = 1
    solver: SolverSettings = field(default_factory=SolverSettings)

    @classmethod
    def from_dict(cls, config: Dict[str, Any]) -> "ExperimentConfig":
        """
        Create ExperimentConfig from a dictionary.

        Accepts `rank` as shorthand for a one-element `ranks` list and a
        nested `solver` mapping.
        """
        data = dict(config)
        if "rank" in data and "ranks" not in data:
            data["ranks"] = [data.pop("rank")]
        data.pop("rank", None)
        solver = SolverSettings.from_dict(data.pop("solver", None))
        known = {f.name for f in fields(cls)} - {"solver"}
        kwargs = {k: v for k, v in data.items() if k in known}
        for key in ("algorithms", "inits", "ranks"):
            if key in kwargs and not isinstance(kwargs[key], (list, tuple)):
                kwargs[key] = [kwargs[key]]
            if key in kwargs:
                kwargs[key] = list(kwargs[key])
        return cls(solver=solver, **kwargs)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)
