"""Tests for the higher-order power method and the rank-d construction."""

import math

import numpy as np
import pytest

from antisym_lowrank.core.base import (
    InvalidShapeError,
    ParameterError,
    RankError,
    SolverStatus,
    StructureError,
)
from antisym_lowrank.core.linalg import random_orthonormal, sym_eig
from antisym_lowrank.core.tensor import (
    contract_except,
    matricize_12,
    multilinear_form,
    permutation_sign,
    tucker_project,
)
from antisym_lowrank.problems.generators import (
    function_tensor,
    random_antisymmetric,
    slater_tensor,
)
from antisym_lowrank.solvers import (
    RankDSolver,
    hopm,
    jacobi,
    kofidis_init_d4,
    rank1_to_antisymmetric,
    stack_factors,
)


class TestSlaterStructure:
    """Eigenstructure of the (0,1)-matricization of antisym(alpha u_0 (x) ... (x) u_3)."""

    @pytest.mark.parametrize("alpha", [1.0, 7.5, -2.0])
    def test_eigenvalues(self, alpha):
        """The nonzero eigenvalues are +-|alpha|/12, three of each."""
        u = random_orthonormal(7, 4, np.random.default_rng(21))
        a = slater_tensor([u[:, k] for k in range(4)], alpha=alpha)
        eig = sym_eig(matricize_12(a).matrix)
        top = np.sort(eig.values[:6])[::-1]
        np.testing.assert_allclose(top[:3], abs(alpha) / 12, rtol=1e-10)
        np.testing.assert_allclose(top[3:], -abs(alpha) / 12, rtol=1e-10)
        assert np.max(np.abs(eig.values[6:])) <= 1e-10 * abs(alpha)

    def test_leading_eigenvectors_are_skew(self, slater4):
        """The leading eigenvectors reshape to skew matrices."""
        a, _ = slater4
        eig = sym_eig(matricize_12(a).matrix)
        for k in range(6):
            v = np.reshape(eig.vectors[:, k], (7, 7), order="F")
            np.testing.assert_allclose(v + v.T, 0.0, atol=1e-10)

    def test_core_norm_is_sqrt_factorial_times_form(self, antisym4, rng):
        """For orthonormal u_k the rank-d core norm equals sqrt(d!) |A(u_0, ..., u_{d-1})|."""
        for _ in range(10):
            u = random_orthonormal(6, 4, rng)
            core = tucker_project(antisym4, u)
            form = multilinear_form(antisym4, [u[:, k] for k in range(4)])
            assert core.norm() == pytest.approx(math.sqrt(24) * abs(form), rel=1e-10)


class TestKofidisInit:
    def test_recovers_the_span(self, slater4):
        """The start spans the Slater vectors."""
        a, u = slater4
        init = np.column_stack(kofidis_init_d4(a))
        cosines = np.linalg.svd(u.T @ init, compute_uv=False)
        np.testing.assert_allclose(cosines, 1.0, atol=1e-10)

    def test_requires_order_four(self, antisym3):
        """Only order-4 tensors are accepted."""
        with pytest.raises(InvalidShapeError):
            kofidis_init_d4(antisym3)

    def test_requires_nonzero(self):
        """The zero tensor has no leading eigenvectors."""
        with pytest.raises(StructureError):
            kofidis_init_d4(np.zeros((5, 5, 5, 5)))


class TestHopm:
    """Tests for hopm."""

    @pytest.mark.parametrize("init", ["hosvd", "kofidis"])
    def test_slater_tensor_converges_immediately(self, slater4, init):
        """A Slater tensor is recovered within two sweeps."""
        a, _ = slater4
        r1 = hopm(a, init=init)
        assert r1.status is SolverStatus.CONVERGED
        assert r1.iterations <= 2
        approx = rank1_to_antisymmetric(a, r1)
        assert approx.error <= 1e-10 * a.norm()
        assert abs(r1.alpha) == pytest.approx(7.5 / 24, rel=1e-10)

    def test_auto_init_picks_kofidis_for_order_four(self, slater4):
        """The automatic start converges on a Slater tensor."""
        a, _ = slater4
        r1 = hopm(a)
        assert r1.status is SolverStatus.CONVERGED

    def test_vectors_orthonormal_after_one_sweep(self, antisym4, rng):
        """One sweep leaves orthonormal vectors."""
        start = [rng.standard_normal(6) for _ in range(4)]
        r1 = hopm(antisym4, init=start, max_iters=1)
        assert r1.orthonormality_defect() <= 1e-10
        assert r1.iterations == 1

    def test_objective_is_nondecreasing(self, antisym4):
        """The |alpha| trace never decreases."""
        r1 = hopm(antisym4, init="hosvd", max_iters=200)
        assert r1.restarts == 0
        assert r1.trace.is_nondecreasing()

    def test_order_three(self, antisym3):
        """The rank-d objective is sqrt(3!) |alpha| for d = 3."""
        r1 = hopm(antisym3)
        assert r1.status is not SolverStatus.FAILED
        assert r1.orthonormality_defect() <= 1e-10
        approx = rank1_to_antisymmetric(antisym3, r1)
        assert approx.objective == pytest.approx(math.sqrt(6) * abs(r1.alpha), rel=1e-8)

    def test_zero_tensor_is_degenerate(self):
        """The zero tensor gives a degenerate result."""
        r1 = hopm(np.zeros((4, 4, 4)))
        assert r1.status is SolverStatus.DEGENERATE
        assert r1.alpha == 0.0

    def test_n_smaller_than_d_is_degenerate(self):
        """n < d gives a degenerate result with d vectors."""
        r1 = hopm(np.zeros((3, 3, 3, 3)))
        assert r1.status is SolverStatus.DEGENERATE
        assert len(r1.vectors) == 4

    def test_kofidis_needs_order_four(self, antisym3):
        """The matricization start is refused for d = 3."""
        with pytest.raises(ParameterError):
            hopm(antisym3, init="kofidis")

    def test_identity_init_rejected(self, antisym3):
        """The identity start is not available."""
        with pytest.raises(ParameterError):
            hopm(antisym3, init="identity")

    def test_explicit_init_shape(self, antisym3):
        """An explicit start needs d vectors."""
        with pytest.raises(InvalidShapeError):
            hopm(antisym3, init=[np.ones(6)] * 2)

    def test_non_antisymmetric_input(self, general_tensor):
        """A general tensor is refused."""
        with pytest.raises(StructureError):
            hopm(general_tensor)

    @pytest.mark.parametrize("seed", range(20))
    def test_agrees_with_jacobi_at_rank_d(self, seed):
        """Both methods reach the same rank-d optimum near a Slater tensor."""
        u = random_orthonormal(7, 4, np.random.default_rng(100 + seed))
        a = slater_tensor([u[:, k] for k in range(4)], alpha=7.5)
        a = a + random_antisymmetric(7, 4, seed=seed) * 0.01
        r1 = hopm(a)
        via_hopm = rank1_to_antisymmetric(a, r1)
        via_jacobi = jacobi(a, 4)
        assert via_hopm.error == pytest.approx(via_jacobi.error, rel=1e-8)

    @pytest.mark.slow
    def test_inits_reach_same_optimum(self):
        """Both starts reach the same optimum on most random tensors."""
        agree = 0
        for seed in range(100):
            a = random_antisymmetric(10, 4, seed=seed)
            e_hosvd = rank1_to_antisymmetric(a, hopm(a, init="hosvd")).error
            e_kofidis = rank1_to_antisymmetric(a, hopm(a, init="kofidis")).error
            agree += abs(e_hosvd - e_kofidis) <= 1e-6 * max(e_hosvd, e_kofidis)
        assert agree >= 90

    def test_kofidis_start_needs_fewer_sweeps(self):
        """On the order-4 function tensor the matricization start converges faster."""
        a = function_tensor(10, 4)
        via_kofidis = hopm(a, init="kofidis")
        via_hosvd = hopm(a, init="hosvd")
        assert via_kofidis.status is SolverStatus.CONVERGED
        assert via_kofidis.iterations < via_hosvd.iterations
        e_kofidis = rank1_to_antisymmetric(a, via_kofidis).error
        e_hosvd = rank1_to_antisymmetric(a, via_hosvd).error
        assert e_kofidis == pytest.approx(e_hosvd, rel=1e-6)

    def test_contraction_is_orthogonal_to_other_vectors(self, antisym4, rng):
        """A contracted in all modes but mu is orthogonal to every other v_nu."""
        tol = 1e-12 * antisym4.norm()
        samples = [hopm(antisym4).vectors]
        samples += [[rng.standard_normal(6) for _ in range(4)] for _ in range(5)]
        for vectors in samples:
            vectors = [v / np.linalg.norm(v) for v in vectors]
            for mu in range(4):
                w = contract_except(antisym4, vectors, mu)
                for nu in range(4):
                    if nu != mu:
                        assert abs(w @ vectors[nu]) <= tol

    def test_rank_d_core_is_signed_alpha(self, antisym3):
        """The rank-d core holds +-alpha on permutations of (0, 1, 2) and zeros elsewhere."""
        r1 = hopm(antisym3)
        core = rank1_to_antisymmetric(antisym3, r1).core.data
        assert abs(core[0, 1, 2]) == pytest.approx(abs(r1.alpha), rel=1e-10)
        tol = 1e-12 * antisym3.norm()
        for idx in np.ndindex(*core.shape):
            if len(set(idx)) < 3:
                assert abs(core[idx]) <= tol
            else:
                expected = permutation_sign(idx) * core[0, 1, 2]
                assert core[idx] == pytest.approx(expected, rel=1e-10)

    def test_orthonormalizing_never_decreases_the_form(self, antisym4, rng):
        """QR of unit vectors scales the form by det(R), so |A(v)| <= |A(q)|."""
        tol = 1e-12 * antisym4.norm()
        for _ in range(20):
            v = rng.standard_normal((6, 4))
            v /= np.linalg.norm(v, axis=0)
            q, r = np.linalg.qr(v)
            form_v = multilinear_form(antisym4, list(v.T))
            form_q = multilinear_form(antisym4, list(q.T))
            assert form_v == pytest.approx(np.prod(np.diag(r)) * form_q, abs=tol)
            assert abs(form_v) <= abs(form_q) + tol


class TestStackFactors:
    def test_orthogonal_factors(self, antisym3):
        """Mutually orthogonal factors stack into an antisymmetric approximation."""
        u = np.eye(6)[:, :4]
        approx = stack_factors(antisym3, [u[:, :2], u[:, 2:]])
        assert approx.rank == 4
        assert approx.is_antisymmetric()

    def test_rejects_overlapping_factors(self, antisym3):
        """Overlapping factors are refused."""
        u = np.eye(6)[:, :2]
        with pytest.raises(StructureError):
            stack_factors(antisym3, [u, u])

    def test_rejects_too_many_columns(self, antisym3):
        """More than n columns in total raises."""
        with pytest.raises(RankError):
            stack_factors(antisym3, [np.eye(6), np.eye(6)[:, :1]])


class TestRankDSolver:
    def test_solve(self, antisym3):
        """The solver returns a rank-d result with alpha in the metadata."""
        result = RankDSolver().solve(antisym3)
        assert result.approx.rank == 3
        assert result.solver == "rankd"
        assert "alpha" in result.metadata

    def test_rank_must_equal_order(self, antisym3):
        """Any rank other than d raises."""
        with pytest.raises(RankError):
            RankDSolver().solve(antisym3, 4)

    def test_supported_ranks(self):
        """Only rank d is supported, and only when n >= d."""
        assert RankDSolver().supported_ranks(6, 3) == [3]
        assert RankDSolver().supported_ranks(2, 3) == []

    def test_zero_tensor(self):
        """The zero tensor gives zero error and a degenerate status."""
        result = RankDSolver().solve(np.zeros((4, 4, 4)))
        assert result.status is SolverStatus.DEGENERATE
        assert result.error == 0.0


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(20))
def test_rank_d_objective_is_sqrt_factorial_times_rank_one_objective(seed):
    """Multi-start maxima of the rank-3 and the rank-1 objective differ by sqrt(3!)."""
    a = random_antisymmetric(5, 3, seed=100 + seed)
    rng = np.random.default_rng(seed)
    best_tucker = None
    best_r1 = None
    for _ in range(50):
        u = random_orthonormal(5, 3, rng)
        approx = jacobi(a, 3, init=u).approx
        if best_tucker is None or approx.objective > best_tucker.objective:
            best_tucker = approx
        r1 = hopm(a, init=[rng.standard_normal(5) for _ in range(3)])
        if best_r1 is None or abs(r1.alpha) > abs(best_r1.alpha):
            best_r1 = r1
    assert best_tucker.objective / abs(best_r1.alpha) == pytest.approx(math.sqrt(6), rel=1e-6)
    assert rank1_to_antisymmetric(a, best_r1).error == pytest.approx(best_tucker.error, rel=1e-8)
