"""Tests for the dense factorization kernels."""

import numpy as np
import pytest

from antisym_lowrank.core.base import RankError, StructureError
from antisym_lowrank.core.linalg import (
    orthonormal_completion,
    orthonormality_defect,
    random_orthonormal,
    reorthonormalize,
    singular_values,
    svd_leading,
    sym_eig,
)


def _matrix_with_spectrum(rng, rows, cols, sigma):
    u = random_orthonormal(rows, len(sigma), rng)
    v = random_orthonormal(cols, len(sigma), rng)
    return u @ np.diag(sigma) @ v.T


class TestSvdLeading:
    """Tests for the leading singular triplets."""

    def test_gram_and_lapack_paths_agree(self, rng):
        """Both code paths return the same triplets on a wide matrix."""
        m = _matrix_with_spectrum(rng, 6, 40, [5.0, 3.0, 2.0, 1.0, 0.5, 0.25])
        gram = svd_leading(m, 4, method="gram")
        lapack = svd_leading(m, 4, method="svd")
        np.testing.assert_allclose(gram.s, lapack.s, rtol=1e-10)
        np.testing.assert_allclose(gram.u, lapack.u, atol=1e-8)
        np.testing.assert_allclose(gram.v, lapack.v, atol=1e-8)

    def test_full_rank_reconstruction(self, rng):
        """The full SVD reconstructs the matrix."""
        m = rng.standard_normal((5, 30))
        res = svd_leading(m, 5)
        np.testing.assert_allclose(res.u @ np.diag(res.s) @ res.v.T, m, atol=1e-10)
        assert res.rank == 5

    def test_sign_convention(self, rng):
        """The largest-magnitude entry of every left singular vector is positive."""
        res = svd_leading(rng.standard_normal((7, 9)), 3)
        for k in range(3):
            col = res.u[:, k]
            assert col[np.argmax(np.abs(col))] > 0

    def test_orthonormal_outputs_for_rank_deficient_input(self, rng):
        """Zero singular values still come with orthonormal right vectors."""
        m = _matrix_with_spectrum(rng, 5, 30, [2.0, 1.0])
        res = svd_leading(m, 4, method="gram")
        assert orthonormality_defect(res.u) < 1e-12
        assert orthonormality_defect(res.v) < 1e-10

    @pytest.mark.parametrize("r", [0, 6])
    def test_rank_out_of_range(self, rng, r):
        """Ranks outside 1..min(m, n) raise."""
        with pytest.raises(RankError):
            svd_leading(rng.standard_normal((5, 8)), r)


class TestSingularValues:
    def test_nonincreasing(self, rng):
        """Singular values come in nonincreasing order."""
        s = singular_values(rng.standard_normal((6, 20)))
        assert np.all(np.diff(s) <= 0)

    def test_resolves_small_values(self, rng):
        """Values far below sqrt(eps) * s_1 are resolved (no Gram squaring)."""
        m = _matrix_with_spectrum(rng, 4, 20, [1.0, 1e-3, 1e-9, 1e-11])
        np.testing.assert_allclose(singular_values(m), [1.0, 1e-3, 1e-9, 1e-11], rtol=1e-3)


class TestSymEig:
    """Tests for the magnitude-ordered symmetric eigensolver."""

    def test_magnitude_order_positive_first(self):
        """Ordering by |lambda|, +lambda before -lambda inside a cluster."""
        res = sym_eig(np.diag([1.0, -3.0, 3.0, 0.5]))
        np.testing.assert_allclose(res.values, [3.0, -3.0, 1.0, 0.5])

    def test_decomposition(self, rng):
        """Eigenvectors and eigenvalues reconstruct the matrix."""
        b = rng.standard_normal((6, 6))
        m = b + b.T
        res = sym_eig(m)
        np.testing.assert_allclose(
            res.vectors @ np.diag(res.values) @ res.vectors.T, m, atol=1e-12
        )
        assert orthonormality_defect(res.vectors) < 1e-12

    def test_non_symmetric_rejected(self, rng):
        """Non-symmetric input raises."""
        with pytest.raises(StructureError):
            sym_eig(rng.standard_normal((4, 4)))

    def test_non_square_rejected(self):
        """Non-square input raises."""
        with pytest.raises(StructureError):
            sym_eig(np.zeros((3, 4)))


class TestOrthonormal:
    """Tests for orthonormal completion and re-orthonormalization."""

    def test_completion_gives_orthogonal_matrix(self, rng):
        """U and its completion form an orthogonal matrix."""
        u = random_orthonormal(7, 3, rng)
        q = np.column_stack([u, orthonormal_completion(u)])
        np.testing.assert_allclose(q.T @ q, np.eye(7), atol=1e-13)

    def test_completion_of_square_is_empty(self, rng):
        """A square orthogonal matrix has an empty completion."""
        assert orthonormal_completion(random_orthonormal(4, 4, rng)).shape == (4, 0)

    def test_completion_rejects_non_orthonormal(self, rng):
        """Non-orthonormal input raises."""
        with pytest.raises(StructureError):
            orthonormal_completion(rng.standard_normal((5, 2)))

    def test_reorthonormalize_keeps_directions(self, rng):
        """Re-orthonormalizing nearly orthonormal columns keeps their directions."""
        u = random_orthonormal(6, 3, rng)
        drifted = u + 1e-9 * rng.standard_normal((6, 3))
        fixed = reorthonormalize(drifted)
        assert orthonormality_defect(fixed) < 1e-14
        np.testing.assert_allclose(fixed, u, atol=1e-8)
