"""Tests for the truncated HOSVD."""

import numpy as np
import pytest

from antisym_lowrank.core.base import RankError, SolverStatus, StructureError
from antisym_lowrank.problems.generators import exact_rank_antisymmetric, random_antisymmetric
from antisym_lowrank.solvers import HosvdSolver, hooi, jacobi, thosvd


class TestThosvd:
    """Tests for thosvd."""

    def test_exact_rank_input_is_reproduced(self):
        """A tensor of exact rank r is reproduced at rank r."""
        a = exact_rank_antisymmetric(8, 3, 5, seed=3)
        approx = thosvd(a, 5)
        assert approx.error <= 1e-10 * a.norm()

    def test_projection_identity(self, antisym3):
        """error^2 = ||A||^2 - ||S||^2."""
        approx = thosvd(antisym3, 3)
        lhs = approx.error ** 2
        rhs = antisym3.norm() ** 2 - approx.objective ** 2
        assert lhs == pytest.approx(rhs, rel=1e-10)

    def test_core_is_antisymmetric(self, antisym3):
        """The core inherits antisymmetry."""
        approx = thosvd(antisym3, 5)
        assert approx.is_antisymmetric()
        assert approx.core.dims == (5, 5, 5)
        assert approx.reconstruct().dims == antisym3.dims

    def test_factor_is_orthonormal(self, antisym4):
        """The factor has orthonormal columns."""
        u = thosvd(antisym4, 4).factor
        np.testing.assert_allclose(u.T @ u, np.eye(4), atol=1e-12)

    def test_full_rank_is_exact(self, antisym3):
        """Rank n gives zero error."""
        assert thosvd(antisym3, 6).error <= 1e-12 * antisym3.norm()

    def test_rejects_non_antisymmetric(self, general_tensor):
        """A general tensor is refused."""
        with pytest.raises(StructureError):
            thosvd(general_tensor, 3)

    @pytest.mark.parametrize("r", [0, 7])
    def test_rank_out_of_range(self, antisym3, r):
        """Ranks outside 1..n raise."""
        with pytest.raises(RankError):
            thosvd(antisym3, r)

    def test_within_sqrt_d_of_jacobi(self):
        """The HOSVD error is at most sqrt(d) times the optimized error."""
        for seed in range(5):
            a = random_antisymmetric(7, 3, seed=seed)
            for r in (3, 5):
                assert thosvd(a, r).error <= np.sqrt(3) * jacobi(a, r).error + 1e-10


class TestHosvdSolver:
    def test_solve(self, antisym3):
        """The solver wrapper reports a converged hosvd result."""
        result = HosvdSolver().solve(antisym3, 3)
        assert result.status is SolverStatus.CONVERGED
        assert result.solver == "hosvd"
        assert len(result.trace) == 1
        assert result.error == pytest.approx(thosvd(antisym3, 3).error)
        assert result.gradient_norm >= 0.0
        assert "wall_time" in result.metadata


# Agreement of Jacobi and HOOI to 1e-6 relative over the 100-tensor batch.
# HOOI ends at a different stationary point in the remaining trials.
MIN_AGREEMENT = {3: 90, 6: 45}


@pytest.fixture(scope="module", params=[3, 6], ids=["r3", "r6"])
def batch(request):
    r = request.param
    runs = []
    for seed in range(100):
        a = random_antisymmetric(10, 3, seed=seed)
        runs.append((a, thosvd(a, r), jacobi(a, r), hooi(a, r)))
    return r, runs


@pytest.mark.slow
class TestBatchComparison:
    """HOSVD against the iterative methods on a seeded batch of 10 x 10 x 10 tensors."""

    def test_quasi_optimality(self, batch):
        """The HOSVD error is within sqrt(3) of the Jacobi error in every trial."""
        _, runs = batch
        for _, approx, result, _ in runs:
            assert approx.error <= np.sqrt(3) * result.error + 1e-10

    def test_iterative_methods_improve_on_hosvd(self, batch):
        """Jacobi and antisymmetrized HOOI never end above the HOSVD error."""
        _, runs = batch
        for _, approx, res_jacobi, res_hooi in runs:
            assert res_jacobi.error <= approx.error + 1e-12
            assert res_hooi.error <= approx.error + 1e-12

    def test_jacobi_and_hooi_mostly_agree(self, batch):
        """Both iterations reach the same approximation in most trials."""
        r, runs = batch
        close = sum(
            abs(res_jacobi.error - res_hooi.error) <= 1e-6 * approx.error
            for _, approx, res_jacobi, res_hooi in runs
        )
        assert close >= MIN_AGREEMENT[r]

    def test_jacobi_converges_with_predicted_gains(self, batch):
        """Every run converges and each accepted rotation raises f by its predicted gain."""
        _, runs = batch
        for a, _, result, _ in runs:
            scale = a.norm() ** 2
            assert result.status is SolverStatus.CONVERGED
            assert result.gradient_norm <= 1e-10
            assert result.metadata["eps"] == pytest.approx(1.0 / 100)
            assert result.metadata["antisymmetric"]
            f = result.trace.objectives ** 2
            np.testing.assert_allclose(
                np.diff(f), np.asarray(result.metadata["gains"]), rtol=0, atol=1e-10 * scale
            )
