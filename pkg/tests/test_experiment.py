"""Tests for batch experiments and the init comparison."""

import json

import pytest

from antisym_lowrank.config.settings import ExperimentConfig
from antisym_lowrank.core.approximator import create_default_approximator
from antisym_lowrank.core.base import BaseSolver, InvalidShapeError
from antisym_lowrank.core.experiment import (
    TRIAL_COLUMNS,
    compare_inits,
    experiment_runs,
    run_experiment,
    run_experiment_async,
    trace_filename,
    trial_tensor,
)
from antisym_lowrank.problems.generators import random_antisymmetric
from antisym_lowrank.utils.trace_io import read_rows


class BrokenSolver(BaseSolver):
    """Solver that always fails numerically."""

    @property
    def solver_name(self):
        return "broken"

    def solve(self, a, rank, **options):
        raise ZeroDivisionError("pivot vanished")


def small_config(tmp_path, **overrides):
    values = dict(
        n=6,
        d=3,
        ranks=[3],
        trials=2,
        algorithms=["hosvd", "jacobi", "rankd"],
        output_dir=str(tmp_path / "out"),
    )
    values.update(overrides)
    return ExperimentConfig(**values)


class TestRuns:
    def test_run_list(self):
        """Every algorithm, init and rank combination becomes a run."""
        cfg = ExperimentConfig(
            algorithms=["hosvd", "hooi", "jacobi", "rankd"],
            inits=["hosvd", "identity", "kofidis"],
            ranks=[3, 5],
        )
        runs = experiment_runs(cfg)
        assert len(runs) == 12
        assert ("hosvd", "hosvd", 5) in runs
        assert ("hooi", "identity", 3) in runs
        assert ("rankd", "kofidis", 3) in runs
        assert not any(alg == "rankd" and init == "identity" for alg, init, _ in runs)
        assert not any(alg == "jacobi" and init == "kofidis" for alg, init, _ in runs)

    def test_trial_seeds(self):
        """Trial k uses seed_base + k."""
        cfg = ExperimentConfig(n=5, d=3, seed_base=40)
        assert trial_tensor(cfg, 2) == random_antisymmetric(5, 3, seed=42)

    def test_trace_filename(self):
        """Trace files are named by trial, solver, init and rank."""
        assert trace_filename(3, ("jacobi", "hosvd", 6)) == "trace_t0003_jacobi_hosvd_r6.csv"


class TestRunExperiment:
    """Tests for run_experiment."""

    def test_writes_files(self, tmp_path):
        """A run writes the summary and per-trial traces."""
        cfg = small_config(tmp_path)
        summary = run_experiment(cfg)
        out = tmp_path / "out"
        assert summary.records == 6
        assert summary.failures == 0
        rows = read_rows(out / "trials.csv")
        assert list(rows[0]) == list(TRIAL_COLUMNS)
        assert [int(r["trial"]) for r in rows] == [0, 0, 0, 1, 1, 1]
        assert len(list((out / "traces").glob("trace_t*.csv"))) == 6
        data = json.loads((out / "summary.json").read_text())
        assert data["records"] == 6
        assert data["provenance"]["command"] == "experiment"
        assert "jacobi/hosvd/r3" in data["error_quantiles"]

    def test_zero_trials(self, tmp_path):
        """Zero trials writes a header-only table."""
        summary = run_experiment(small_config(tmp_path, trials=0))
        assert summary.records == 0
        assert summary.error_quantiles == {}
        lines = (tmp_path / "out" / "trials.csv").read_text().splitlines()
        assert lines == [",".join(TRIAL_COLUMNS)]

    def test_failures_are_recorded(self, tmp_path):
        """A failing run is recorded instead of aborting the experiment."""
        approximator = create_default_approximator()
        approximator.add_solver("jacobi", BrokenSolver())
        summary = run_experiment(small_config(tmp_path), approximator=approximator)
        assert summary.failures == 2
        rows = read_rows(tmp_path / "out" / "trials.csv")
        failed = [r for r in rows if r["status"] == "failed"]
        assert [r["algorithm"] for r in failed] == ["jacobi", "jacobi"]
        assert failed[0]["error"] == ""

    def test_deterministic_across_thread_counts(self, tmp_path):
        """Results do not depend on the number of threads."""
        one = run_experiment(small_config(tmp_path, trials=3, threads=1), write=False)
        many = run_experiment(small_config(tmp_path, trials=3, threads=3), write=False)
        assert one.error_quantiles == many.error_quantiles

    def test_no_files_without_write(self, tmp_path):
        """Nothing is written when writing is disabled."""
        run_experiment(small_config(tmp_path), write=False)
        assert not (tmp_path / "out").exists()

    def test_groundstate_family(self, tmp_path):
        """The ground-state family runs end to end."""
        cfg = small_config(
            tmp_path, family="groundstate", n=6, d=2, ranks=[2], trials=1, algorithms=["hosvd"]
        )
        summary = run_experiment(cfg, write=False)
        assert summary.records == 1
        assert summary.failures == 0

    @pytest.mark.asyncio
    async def test_async_entry_point(self, tmp_path):
        summary = await run_experiment_async(small_config(tmp_path), command="test", write=False)
        assert summary.provenance["command"] == "test"
        assert summary.converged + summary.failures <= summary.records


class TestCompareInits:
    def test_slater_tensor(self, slater4):
        """Both starts agree on a Slater tensor."""
        a, _ = slater4
        comparison = compare_inits(a)
        hosvd_error, kofidis_error = comparison.errors
        assert hosvd_error <= 1e-10 * a.norm()
        assert kofidis_error <= 1e-10 * a.norm()
        rows = comparison.aligned_rows()
        assert len(rows) == max(len(comparison.hosvd.trace), len(comparison.kofidis.trace))
        assert set(comparison.to_dict()) == {"hosvd", "kofidis"}

    def test_random_tensor(self, antisym4):
        """Both starts run on a random order-4 tensor."""
        comparison = compare_inits(antisym4, max_iters=20)
        for result in (comparison.hosvd, comparison.kofidis):
            assert result.approx.rank == 4
            assert result.iterations <= 20

    def test_requires_order_four(self, antisym3):
        """Order-3 input is rejected."""
        with pytest.raises(InvalidShapeError):
            compare_inits(antisym3)
