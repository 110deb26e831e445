"""Experiment configuration validation with actionable error messages.

Failures are reported as a list of messages naming the offending field, so
a bad config file can be fixed without reading a stack trace.

Usage:
    from antisym_lowrank.core.validation import validate_experiment_config

    result = validate_experiment_config({"family": "random-batch", "n": 10, "d": 3, "ranks": [4]})
    if not result.valid:
        for error in result.errors:
            print(f"ERROR: {error}")
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from antisym_lowrank.config.settings import ALGORITHMS, FAMILIES, INITS, ExperimentConfig
from antisym_lowrank.core.base import AntisymError
from antisym_lowrank.core.rank import admissible_rank, attainable_ranks


class ConfigValidationError(AntisymError):
    """Raised when configuration validation fails with actionable details."""

    def __init__(self, message: str, field: Optional[str] = None):
        self.field = field
        super().__init__(message)


@dataclass
class ValidationResult:
    """Result of configuration validation."""

    valid: bool
    errors: List[str] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)
    config: Optional[ExperimentConfig] = None


def _as_list(value: Any) -> List[Any]:
    if value is None:
        return []
    return list(value) if isinstance(value, (list, tuple)) else [value]


def _check_int(config: Dict[str, Any], key: str, minimum: int, errors: List[str]) -> Optional[int]:
    if key not in config:
        return None
    value = config[key]
    if isinstance(value, bool) or not isinstance(value, int):
        errors.append(f"'{key}' must be an integer, got {type(value).__name__}")
        return None
    if value < minimum:
        errors.append(f"'{key}' must be >= {minimum}, got {value}")
        return None
    return value


def validate_experiment_config(config: Dict[str, Any]) -> ValidationResult:
    """
    Validate an experiment configuration dictionary.

    Args:
        config: Raw configuration (as loaded from JSON or YAML)

    Returns:
        ValidationResult with errors, warnings and the parsed ExperimentConfig if valid

    Example:
        >>> result = validate_experiment_config({"n": 10, "d": 3, "ranks": [3, 6]})
        >>> result.valid
        True
    """
    errors: List[str] = []
    warnings: List[str] = []
    if not isinstance(config, dict):
        return ValidationResult(
            valid=False, errors=[f"config must be a dict, got {type(config).__name__}"]
        )

    defaults = ExperimentConfig()
    family = config.get("family", defaults.family)
    if family not in FAMILIES:
        errors.append(f"unknown family '{family}'. Available: {list(FAMILIES)}")

    algorithms = _as_list(config.get("algorithms", defaults.algorithms))
    for name in algorithms:
        if name not in ALGORITHMS:
            errors.append(f"unknown algorithm '{name}'. Available: {list(ALGORITHMS)}")
    if not algorithms:
        errors.append("'algorithms' must name at least one algorithm")

    inits = _as_list(config.get("inits", defaults.inits))
    for name in inits:
        if name not in INITS:
            errors.append(f"unknown init '{name}'. Available: {list(INITS)}")

    d = _check_int(config, "d", 2, errors)
    d = defaults.d if d is None and "d" not in config else d
    n = _check_int(config, "n", 1, errors)
    n = defaults.n if n is None and "n" not in config else n
    _check_int(config, "trials", 0, errors)
    _check_int(config, "threads", 1, errors)
    _check_int(config, "seed_base", 0, errors)

    if n is not None and d is not None:
        if n < d:
            errors.append(f"'n' must be >= d (got n={n}, d={d}); the tensor would be zero")
        if family == "function" and d not in (3, 4):
            errors.append(f"function family supports d in {{3, 4}}, got d={d}")
        if family == "groundstate" and n < 3:
            errors.append(f"groundstate family needs n >= 3, got n={n}")

    ranks = _as_list(config.get("ranks", config.get("rank", defaults.ranks)))
    rank_algorithms = [a for a in algorithms if a != "rankd"]
    if n is not None and d is not None and n >= d:
        for r in ranks:
            if isinstance(r, bool) or not isinstance(r, int):
                errors.append(f"rank {r!r} must be an integer")
            elif not (1 <= r <= n) or not admissible_rank(n, d, r):
                errors.append(
                    f"rank {r} is not attainable for n={n}, d={d}. "
                    f"Admissible: {[x for x in attainable_ranks(n, d) if x > 0]}"
                )
    if rank_algorithms and not ranks:
        errors.append(f"'ranks' is required for algorithms {rank_algorithms}")
    if not rank_algorithms and ("ranks" in config or "rank" in config):
        warnings.append("'ranks' has no effect: rankd always approximates with rank d")

    if "kofidis" in inits and d is not None and d != 4:
        errors.append(f"init 'kofidis' needs d = 4, got d={d}")
    if family != "groundstate":
        for key in ("c_v", "c_w"):
            if key in config:
                warnings.append(f"'{key}' only affects the groundstate family and will be ignored")

    solver = config.get("solver", {})
    if not isinstance(solver, dict):
        errors.append(f"'solver' must be a dict, got {type(solver).__name__}")
    elif "eps_factor" in solver and not (0.0 < float(solver["eps_factor"]) < 2.0):
        errors.append(f"'solver.eps_factor' must lie in (0, 2), got {solver['eps_factor']}")

    if errors:
        return ValidationResult(valid=False, errors=errors, warnings=warnings)

    try:
        parsed = ExperimentConfig.from_dict(config)
        return ValidationResult(valid=True, errors=[], warnings=warnings, config=parsed)
    except (TypeError, ValueError) as e:
        errors.append(f"Failed to build ExperimentConfig: {e}")
        return ValidationResult(valid=False, errors=errors, warnings=warnings)


def validate_experiment_config_strict(config: Dict[str, Any]) -> ExperimentConfig:
    """
    Validate configuration and raise on any error.

    Raises:
        ConfigValidationError: If validation fails
    """
    result = validate_experiment_config(config)
    if not result.valid:
        raise ConfigValidationError(f"Configuration invalid: {'; '.join(result.errors)}")
    return result.config
