"""Batch experiments: trial generation, solver dispatch and result files.

A run produces, under `output_dir`:

    trials.csv      one row per (trial, algorithm, init, rank), header TRIAL_COLUMNS
    traces/trace_t0003_jacobi_hosvd_r6.csv   convergence trace per solver run
    summary.json    ExperimentSummary (error quantiles, failures, provenance)

Trials run in a thread pool; rows are emitted in trial order whatever the
completion order.

Usage:
    from antisym_lowrank.config import ExperimentConfig
    from antisym_lowrank.core.experiment import run_experiment

    summary = run_experiment(ExperimentConfig(n=10, d=3, ranks=[3, 6], trials=100))
"""

import asyncio
import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field

from antisym_lowrank.config.settings import ExperimentConfig
from antisym_lowrank.core.approximator import Approximator, create_default_approximator
from antisym_lowrank.core.base import AntisymError, ApproximationResult, InvalidShapeError, SolverStatus
from antisym_lowrank.core.provenance import create_provenance, hash_tensor
from antisym_lowrank.core.results import ConvergenceTrace
from antisym_lowrank.core.tensor import ArrayLike, DenseTensor

logger = logging.getLogger(__name__)

TRIAL_COLUMNS = (
    "trial",
    "algorithm",
    "init",
    "rank",
    "error",
    "gradnorm",
    "iterations",
    "status",
    "wall_time",
)
COMPARE_COLUMNS = ("iteration", "error_hosvd", "error_kofidis")
QUANTILES = {"min": 0.0, "q25": 0.25, "median": 0.5, "q75": 0.75, "max": 1.0}

# Failures that are recorded per trial instead of aborting the run
TRIAL_FAILURES = (AntisymError, ArithmeticError, ValueError, np.linalg.LinAlgError)

Run = Tuple[str, str, int]


class TrialRecord(BaseModel):
    """One solver run on one trial tensor."""

    trial: int
    algorithm: str
    init: str
    rank: int
    error: Optional[float] = None
    gradnorm: Optional[float] = None
    iterations: int = 0
    status: str
    wall_time: float = 0.0
    tensor_hash: Optional[str] = None
    message: Optional[str] = Field(None, description="Failure reason for status 'failed'")

    def as_row(self) -> List[Any]:
        return [
            self.trial,
            self.algorithm,
            self.init,
            self.rank,
            "" if self.error is None else repr(self.error),
            "" if self.gradnorm is None else repr(self.gradnorm),
            self.iterations,
            self.status,
            "%.6f" % self.wall_time,
        ]


class ExperimentSummary(BaseModel):
    """Machine-readable summary written to summary.json and printed by the CLI."""

    family: str
    n: int
    d: int
    trials: int
    records: int = 0
    failures: int = 0
    converged: int = 0
    error_quantiles: Dict[str, Dict[str, float]] = Field(default_factory=dict)
    files: List[str] = Field(default_factory=list)
    provenance: Dict[str, Any] = Field(default_factory=dict)


@dataclass
class TrialOutcome:
    index: int
    records: List[TrialRecord] = field(default_factory=list)
    traces: Dict[Run, ConvergenceTrace] = field(default_factory=dict)


def experiment_runs(cfg: ExperimentConfig) -> List[Run]:
    """
    (algorithm, init, rank) combinations executed on every trial tensor.

    hosvd has no initialization; rankd always uses rank d and the HOPM inits
    (hosvd, kofidis); hooi and jacobi use the subspace inits (hosvd, identity).
    """
    runs: List[Run] = []
    for algorithm in cfg.algorithms:
        if algorithm == "hosvd":
            runs.extend(("hosvd", "hosvd", r) for r in cfg.ranks)
        elif algorithm == "rankd":
            inits = [i for i in cfg.inits if i != "identity"] or ["hosvd"]
            runs.extend(("rankd", init, cfg.d) for init in inits)
        else:
            inits = [i for i in cfg.inits if i != "kofidis"] or ["hosvd"]
            runs.extend((algorithm, init, r) for init in inits for r in cfg.ranks)
    return list(dict.fromkeys(runs))


def trial_tensor(cfg: ExperimentConfig, trial: int) -> DenseTensor:
    """The tensor of trial `trial`; random families use seed seed_base + trial."""
    from antisym_lowrank.problems import (
        HamiltonianSpec,
        antisym_ground_state,
        function_tensor,
        random_antisymmetric,
    )

    seed = cfg.seed_base + trial
    if cfg.family == "random-batch":
        return random_antisymmetric(cfg.n, cfg.d, seed=seed)
    if cfg.family == "function":
        return function_tensor(cfg.n, cfg.d)
    spec = HamiltonianSpec(d=cfg.d, n=cfg.n, c_v=cfg.c_v, c_w=cfg.c_w)
    return antisym_ground_state(spec, solver_tol=cfg.solver.eig_tol, seed=seed).eigentensor


def trace_filename(trial: int, run: Run) -> str:
    algorithm, init, rank = run
    return f"trace_t{trial:04d}_{algorithm}_{init}_r{rank}.csv"


def _record(trial: int, run: Run, result: ApproximationResult, tensor_hash: str) -> TrialRecord:
    algorithm, init, rank = run
    return TrialRecord(
        trial=trial,
        algorithm=algorithm,
        init=init,
        rank=rank,
        error=float(result.error),
        gradnorm=float(result.gradient_norm),
        iterations=result.iterations,
        status=result.status.value,
        wall_time=float(result.metadata.get("wall_time", 0.0)),
        tensor_hash=tensor_hash,
    )


def _failure(trial: int, run: Run, error: Exception, tensor_hash: Optional[str] = None) -> TrialRecord:
    algorithm, init, rank = run
    return TrialRecord(
        trial=trial,
        algorithm=algorithm,
        init=init,
        rank=rank,
        status=SolverStatus.FAILED.value,
        tensor_hash=tensor_hash,
        message=f"{type(error).__name__}: {error}",
    )


def run_trial(cfg: ExperimentConfig, trial: int, approximator: Approximator) -> TrialOutcome:
    """Generate one trial tensor and run every configured solver on it."""
    outcome = TrialOutcome(index=trial)
    runs = experiment_runs(cfg)
    try:
        a = trial_tensor(cfg, trial)
    except TRIAL_FAILURES as e:
        logger.error("trial %d: tensor generation failed: %s", trial, e)
        outcome.records = [_failure(trial, run, e) for run in runs]
        return outcome

    digest = hash_tensor(a)
    for run in runs:
        algorithm, init, rank = run
        options = cfg.solver.options_for(algorithm)
        options["init"] = init
        if algorithm == "rankd":
            options["seed"] = cfg.seed_base + trial
        elif algorithm == "hosvd":
            options.pop("init")
        start = time.perf_counter()
        try:
            result = approximator.approximate(a, rank=rank, solver=algorithm, **options)
        except TRIAL_FAILURES as e:
            logger.warning("trial %d: %s/%s r=%d failed: %s", trial, algorithm, init, rank, e)
            outcome.records.append(_failure(trial, run, e, digest))
            continue
        record = _record(trial, run, result, digest)
        record.wall_time = time.perf_counter() - start
        outcome.records.append(record)
        outcome.traces[run] = result.trace
        logger.debug(
            "trial %d: %s/%s r=%d error=%.6e status=%s",
            trial, algorithm, init, rank, record.error, record.status,
        )
    return outcome


async def run_trials(
    cfg: ExperimentConfig, approximator: Optional[Approximator] = None
) -> List[TrialOutcome]:
    """
    Run all trials in a pool of `cfg.threads` worker threads.

    Returns:
        Outcomes ordered by trial index
    """
    approximator = approximator or create_default_approximator()
    loop = asyncio.get_running_loop()
    with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
        tasks = [
            loop.run_in_executor(pool, run_trial, cfg, t, approximator) for t in range(cfg.trials)
        ]
        outcomes = await asyncio.gather(*tasks)
    return sorted(outcomes, key=lambda o: o.index)


def error_quantiles(records: List[TrialRecord]) -> Dict[str, Dict[str, float]]:
    """Error quantiles per algorithm/init/rank over the successful runs."""
    groups: Dict[str, List[float]] = {}
    for rec in records:
        if rec.error is not None:
            groups.setdefault(f"{rec.algorithm}/{rec.init}/r{rec.rank}", []).append(rec.error)
    out: Dict[str, Dict[str, float]] = {}
    for key, errors in groups.items():
        values = np.asarray(errors)
        stats = {name: float(np.quantile(values, q)) for name, q in QUANTILES.items()}
        stats["mean"] = float(values.mean())
        stats["count"] = float(values.size)
        out[key] = stats
    return out


def write_outputs(
    output_dir: Path, outcomes: List[TrialOutcome], summary: ExperimentSummary
) -> List[str]:
    from antisym_lowrank.utils.trace_io import write_rows, write_trace

    output_dir.mkdir(parents=True, exist_ok=True)
    files = []
    trials_csv = output_dir / "trials.csv"
    write_rows(trials_csv, TRIAL_COLUMNS, [r.as_row() for o in outcomes for r in o.records])
    files.append(str(trials_csv))
    for outcome in outcomes:
        for run, trace in outcome.traces.items():
            path = output_dir / "traces" / trace_filename(outcome.index, run)
            write_trace(path, trace)
            files.append(str(path))
    summary_path = output_dir / "summary.json"
    files.append(str(summary_path))
    summary.files = files
    summary_path.write_text(json.dumps(summary.model_dump(), indent=2), encoding="utf-8")
    return files


async def run_experiment_async(
    cfg: ExperimentConfig,
    approximator: Optional[Approximator] = None,
    command: Optional[str] = "experiment",
    write: bool = True,
) -> ExperimentSummary:
    """
    Run an experiment and write its files.

    Args:
        cfg: Validated experiment configuration
        approximator: Solver registry (default: `create_default_approximator()`)
        command: Recorded in the provenance
        write: Write trials.csv, traces and summary.json under cfg.output_dir

    Returns:
        ExperimentSummary
    """
    logger.info(
        "experiment: family=%s n=%d d=%d trials=%d runs/trial=%d",
        cfg.family, cfg.n, cfg.d, cfg.trials, len(experiment_runs(cfg)),
    )
    outcomes = await run_trials(cfg, approximator)
    records = [r for o in outcomes for r in o.records]
    summary = ExperimentSummary(
        family=cfg.family,
        n=cfg.n,
        d=cfg.d,
        trials=cfg.trials,
        records=len(records),
        failures=sum(1 for r in records if r.status == SolverStatus.FAILED.value),
        converged=sum(1 for r in records if r.status == SolverStatus.CONVERGED.value),
        error_quantiles=error_quantiles(records),
        provenance=create_provenance(cfg.to_dict(), seed_base=cfg.seed_base, command=command).to_dict(),
    )
    if write:
        write_outputs(Path(cfg.output_dir), outcomes, summary)
    logger.info("experiment done: %d records, %d failures", summary.records, summary.failures)
    return summary


def run_experiment(
    cfg: ExperimentConfig,
    approximator: Optional[Approximator] = None,
    command: Optional[str] = "experiment",
    write: bool = True,
) -> ExperimentSummary:
    """Synchronous entry point for `run_experiment_async`."""
    return asyncio.run(run_experiment_async(cfg, approximator, command, write))


@dataclass
class InitComparison:
    """Rank-d HOPM runs from the HOSVD and the eigenvector initialization."""

    hosvd: ApproximationResult
    kofidis: ApproximationResult

    @property
    def errors(self) -> Tuple[float, float]:
        return self.hosvd.error, self.kofidis.error

    def aligned_rows(self) -> List[List[Any]]:
        """Trace errors side by side; the shorter run is padded with blanks."""
        left, right = self.hosvd.trace.errors, self.kofidis.trace.errors
        rows = []
        for k in range(max(len(left), len(right))):
            rows.append([
                k,
                repr(left[k]) if k < len(left) else "",
                repr(right[k]) if k < len(right) else "",
            ])
        return rows

    def to_dict(self) -> Dict[str, Any]:
        return {
            name: {
                "error": res.error,
                "iterations": res.iterations,
                "status": res.status.value,
                "alpha": res.metadata.get("alpha"),
            }
            for name, res in (("hosvd", self.hosvd), ("kofidis", self.kofidis))
        }


def compare_inits(
    a: ArrayLike, tol: float = 1e-10, max_iters: int = 1000, seed: Optional[int] = 0
) -> InitComparison:
    """
    Run HOPM on an order-4 tensor from both initializations.

    Raises:
        InvalidShapeError: If the tensor is not of order 4
    """
    from antisym_lowrank.solvers import RankDSolver

    a = a if isinstance(a, DenseTensor) else DenseTensor(a)
    if a.order != 4:
        raise InvalidShapeError(f"compare_inits needs an order-4 tensor, got order {a.order}")
    solver = RankDSolver(tol=tol, max_iters=max_iters, seed=seed)
    results = {init: solver.solve(a, init=init) for init in ("hosvd", "kofidis")}
    logger.info(
        "compare_inits: hosvd error=%.6e (%d sweeps), kofidis error=%.6e (%d sweeps)",
        results["hosvd"].error, results["hosvd"].iterations,
        results["kofidis"].error, results["kofidis"].iterations,
    )
    return InitComparison(hosvd=results["hosvd"], kofidis=results["kofidis"])
