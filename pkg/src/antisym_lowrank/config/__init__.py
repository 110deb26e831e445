"""Configuration module."""

from antisym_lowrank.config.settings import (
    ALGORITHMS,
    FAMILIES,
    INITS,
    ExperimentConfig,
    SolverSettings,
)

__all__ = ["ExperimentConfig", "SolverSettings", "FAMILIES", "ALGORITHMS", "INITS"]
