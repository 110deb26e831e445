"""Dense matrix factorizations used by the approximation algorithms.

Thin wrappers around LAPACK (via scipy.linalg) that add the contracts the
solvers rely on: deterministic signs, magnitude ordering of eigenvalues and
residual-level guarantees on orthonormality.

Sign convention: every returned singular vector / eigenvector has its entry
of largest magnitude positive (ties: lowest index).
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from antisym_lowrank.core.base import RankError, StructureError

# Wide matrices (cols > GRAM_ASPECT * rows) go through the Gram eigenproblem.
GRAM_ASPECT = 2


@dataclass(frozen=True)
class SvdResult:
    """Leading singular triplets: m ~ u @ diag(s) @ v.T."""

    u: np.ndarray
    s: np.ndarray
    v: np.ndarray

    @property
    def rank(self) -> int:
        return self.s.shape[0]


@dataclass(frozen=True)
class SymEigResult:
    """Eigenpairs of a symmetric matrix ordered by descending |value|."""

    values: np.ndarray
    vectors: np.ndarray


def sign_normalize(vectors: np.ndarray) -> np.ndarray:
    """Column signs such that each column's largest-magnitude entry is positive."""
    if vectors.size == 0:
        return np.ones(vectors.shape[1] if vectors.ndim == 2 else 0)
    pivots = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[pivots, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return signs


def _orthonormalize_columns(raw: np.ndarray, good: np.ndarray, seed: int = 0) -> np.ndarray:
    """QR-orthonormalize `raw`, replacing columns flagged not `good` by random fill."""
    raw = np.array(raw)
    bad = ~good
    if np.any(bad):
        rng = np.random.default_rng(seed)
        raw[:, bad] = rng.standard_normal((raw.shape[0], int(bad.sum())))
    return reorthonormalize(raw)


def svd_leading(m: np.ndarray, r: int, method: str = "auto") -> SvdResult:
    """
    Leading r singular triplets of a dense matrix.

    For wide matrices (the matricizations n x n^(d-1)) the left singular vectors
    are eigenvectors of the n x n Gram matrix m m^T, which avoids the long-side
    factorization. This squares the condition number: singular values below
    about sqrt(eps) * s_1 are not resolved, so use `singular_values` for rank
    decisions.

    Args:
        m: Matrix (rows x cols)
        r: Number of triplets, 1 <= r <= min(rows, cols)
        method: "auto", "gram" or "svd"

    Returns:
        SvdResult with u (rows x r), s (r,), v (cols x r)

    Raises:
        RankError: If r is out of range
    """
    m = np.asarray(m, dtype=np.float64)
    rows, cols = m.shape
    if not (1 <= r <= min(rows, cols)):
        raise RankError(f"r={r} out of range for a {rows}x{cols} matrix")
    if method == "auto":
        method = "gram" if cols > GRAM_ASPECT * rows else "svd"

    if method == "gram":
        values, vectors = scipy.linalg.eigh(m @ m.T, check_finite=False)
        order = np.argsort(values)[::-1][:r]
        u = vectors[:, order]
        s = np.sqrt(np.clip(values[order], 0.0, None))
        u = u * sign_normalize(u)
        raw_v = m.T @ u
        tiny = max(rows, cols) * np.finfo(float).eps * (s[0] if s.size else 0.0)
        good = s > tiny
        v = _orthonormalize_columns(raw_v / np.where(good, s, 1.0), good)
        # Keep v aligned with m^T u / s where that is defined.
        flip = np.sign(np.sum(v * raw_v, axis=0))
        flip[~good | (flip == 0)] = 1.0
        return SvdResult(u=u, s=s, v=v * flip)

    if method != "svd":
        raise ValueError(f"unknown svd method: {method}")
    u, s, vt = scipy.linalg.svd(m, full_matrices=False, check_finite=False)
    u, s, v = u[:, :r], s[:r], vt[:r].T
    signs = sign_normalize(u)
    return SvdResult(u=u * signs, s=s, v=v * signs)


def singular_values(m: np.ndarray) -> np.ndarray:
    """All singular values in nonincreasing order (LAPACK, no Gram squaring)."""
    return scipy.linalg.svdvals(np.asarray(m, dtype=np.float64), check_finite=False)


def sym_eig(m: np.ndarray, cluster_tol: float = 1e-10) -> SymEigResult:
    """
    Full eigendecomposition of a symmetric matrix, ordered by descending |lambda|.

    Eigenvalues whose magnitudes agree to cluster_tol * max|lambda| are ordered
    by descending value, so +lambda precedes -lambda.

    Raises:
        StructureError: If m is not symmetric to 1e-10 * (1 + ||m||)
    """
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise StructureError(f"sym_eig needs a square matrix, got shape {m.shape}")
    scale = np.linalg.norm(m)
    if np.linalg.norm(m - m.T) > 1e-10 * (1.0 + scale):
        raise StructureError("matrix is not symmetric within tolerance")
    values, vectors = scipy.linalg.eigh(0.5 * (m + m.T), check_finite=False)

    order = list(np.argsort(-np.abs(values), kind="stable"))
    top = np.max(np.abs(values)) if values.size else 0.0
    tol = cluster_tol * top
    ordered = []
    k = 0
    while k < len(order):
        cluster = [order[k]]
        k += 1
        while k < len(order) and abs(abs(values[cluster[0]]) - abs(values[order[k]])) <= tol:
            cluster.append(order[k])
            k += 1
        ordered.extend(sorted(cluster, key=lambda idx: -values[idx]))

    values = values[ordered]
    vectors = vectors[:, ordered]
    return SymEigResult(values=values, vectors=vectors * sign_normalize(vectors))


def orthonormality_defect(u: np.ndarray) -> float:
    """||U^T U - I||_F."""
    u = np.asarray(u, dtype=np.float64)
    return float(np.linalg.norm(u.T @ u - np.eye(u.shape[1])))


def orthonormal_completion(u: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """
    Columns U_perp such that [U, U_perp] is orthogonal.

    Args:
        u: n x r matrix with orthonormal columns
        tol: Accepted ||U^T U - I||

    Returns:
        n x (n - r) matrix (empty when r = n)

    Raises:
        StructureError: If the columns of u are not orthonormal
    """
    u = np.asarray(u, dtype=np.float64)
    n, r = u.shape
    if orthonormality_defect(u) > tol:
        raise StructureError("input columns are not orthonormal")
    if r == n:
        return np.zeros((n, 0))
    q, _ = scipy.linalg.qr(u, mode="full", check_finite=False)
    return q[:, r:]


def reorthonormalize(u: np.ndarray) -> np.ndarray:
    """Closest-in-span orthonormal columns via QR, keeping column directions."""
    q, r = np.linalg.qr(np.asarray(u, dtype=np.float64))
    d = np.sign(np.diag(r))
    d[d == 0] = 1.0
    return q * d


def random_orthonormal(n: int, r: int, rng: Optional[np.random.Generator] = None) -> np.ndarray:
    """Random n x r matrix with orthonormal columns."""
    rng = rng or np.random.default_rng()
    return reorthonormalize(rng.standard_normal((n, r)))
