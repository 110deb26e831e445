"""Dense tensor storage and the structural operations on it.

Entries are stored in the linearization order where the first index varies
fastest (numpy Fortran order), so the mode-0 matricization is a plain reshape
of the buffer. All indices and modes are 0-based.

Usage:
    from antisym_lowrank.core.tensor import DenseTensor, antisymmetrize, matricize

    x = DenseTensor(np.random.default_rng(0).random((4, 4, 4)))
    a = antisymmetrize(x)
    m = matricize(a, 0).matrix      # 4 x 16
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from antisym_lowrank.core.base import InvalidShapeError

ArrayLike = Union["DenseTensor", np.ndarray]


class DenseTensor:
    """Order-d dense real tensor with read-only float64 storage.

    Example:
        >>> t = DenseTensor.from_vector((2, 2), [1.0, 2.0, 3.0, 4.0])
        >>> t[1, 0]
        2.0
    """

    __slots__ = ("_data",)

    def __init__(self, data):
        arr = np.array(data, dtype=np.float64)
        if arr.ndim < 1:
            raise InvalidShapeError("tensor order must be at least 1")
        if any(n < 1 for n in arr.shape):
            raise InvalidShapeError(f"all dimensions must be positive, got {arr.shape}")
        arr.setflags(write=False)
        self._data = arr

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "DenseTensor":
        # Takes ownership of a freshly computed array without copying.
        obj = cls.__new__(cls)
        arr = np.asarray(arr, dtype=np.float64)
        if arr.ndim < 1:
            raise InvalidShapeError("tensor order must be at least 1")
        arr.setflags(write=False)
        obj._data = arr
        return obj

    @classmethod
    def zeros(cls, dims: Sequence[int]) -> "DenseTensor":
        return cls(np.zeros(tuple(dims)))

    @classmethod
    def from_vector(cls, dims: Sequence[int], values: Iterable[float]) -> "DenseTensor":
        """Build a tensor from values listed with the first index varying fastest."""
        dims = tuple(int(n) for n in dims)
        flat = np.asarray(list(values) if not isinstance(values, np.ndarray) else values,
                          dtype=np.float64).ravel()
        expected = int(np.prod(dims)) if dims else 0
        if flat.size != expected:
            raise InvalidShapeError(
                f"expected {expected} values for dims {dims}, got {flat.size}"
            )
        return cls(np.reshape(flat, dims, order="F"))

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def dims(self) -> Tuple[int, ...]:
        return self._data.shape

    @property
    def order(self) -> int:
        return self._data.ndim

    @property
    def size(self) -> int:
        return self._data.size

    @property
    def is_cubical(self) -> bool:
        """True when all dimensions are equal."""
        return len(set(self.dims)) == 1

    def to_vector(self) -> np.ndarray:
        return np.ravel(self._data, order="F")

    def copy_data(self) -> np.ndarray:
        """Writable copy of the entries."""
        return np.array(self._data)

    def norm(self) -> float:
        return frobenius_norm(self)

    def __getitem__(self, index):
        return self._data[index]

    def __array__(self, dtype=None, copy=None):
        return self._data if dtype is None else self._data.astype(dtype)

    def __add__(self, other: "DenseTensor") -> "DenseTensor":
        _check_same_dims(self, other)
        return DenseTensor._wrap(self._data + other._data)

    def __sub__(self, other: "DenseTensor") -> "DenseTensor":
        _check_same_dims(self, other)
        return DenseTensor._wrap(self._data - other._data)

    def __mul__(self, scalar: float) -> "DenseTensor":
        return DenseTensor._wrap(self._data * float(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "DenseTensor":
        return DenseTensor._wrap(-self._data)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DenseTensor):
            return NotImplemented
        return self.dims == other.dims and bool(np.array_equal(self._data, other._data))

    __hash__ = None

    def __repr__(self) -> str:
        return f"DenseTensor(dims={self.dims}, norm={self.norm():.6g})"


@dataclass(frozen=True)
class Matricization:
    """A matricization together with the modes mapped to its rows."""

    modes: Tuple[int, ...]
    matrix: np.ndarray

    @property
    def shape(self) -> Tuple[int, int]:
        return self.matrix.shape


@dataclass(frozen=True)
class Rotation:
    """Givens rotation R(i, j, phi) acting on rows/columns i < j."""

    i: int
    j: int
    phi: float

    def __post_init__(self):
        if not (0 <= self.i < self.j):
            raise InvalidShapeError(f"rotation needs 0 <= i < j, got ({self.i}, {self.j})")

    @property
    def cos(self) -> float:
        return math.cos(self.phi)

    @property
    def sin(self) -> float:
        return math.sin(self.phi)

    def matrix(self, n: int) -> np.ndarray:
        """Dense n x n rotation matrix."""
        self._check_size(n)
        r = np.eye(n)
        c, s = self.cos, self.sin
        r[self.i, self.i] = c
        r[self.i, self.j] = -s
        r[self.j, self.i] = s
        r[self.j, self.j] = c
        return r

    def generator(self, n: int) -> np.ndarray:
        """Derivative of R(i, j, phi) at phi = 0."""
        self._check_size(n)
        g = np.zeros((n, n))
        g[self.i, self.j] = -1.0
        g[self.j, self.i] = 1.0
        return g

    def _check_size(self, n: int) -> None:
        if self.j >= n:
            raise InvalidShapeError(f"rotation index {self.j} out of range for n={n}")


def _as_array(x: ArrayLike) -> np.ndarray:
    return x.data if isinstance(x, DenseTensor) else np.asarray(x, dtype=np.float64)


def _check_same_dims(x: ArrayLike, y: ArrayLike) -> None:
    if _as_array(x).shape != _as_array(y).shape:
        raise InvalidShapeError(
            f"dimension mismatch: {_as_array(x).shape} vs {_as_array(y).shape}"
        )


def _check_mode(order: int, mu: int) -> None:
    if not (0 <= mu < order):
        raise InvalidShapeError(f"mode {mu} out of range for order {order}")


def permutation_sign(perm: Sequence[int]) -> int:
    """Sign of a permutation of 0..k-1 given as a sequence."""
    perm = list(perm)
    sign = 1
    seen = [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        k = start
        while not seen[k]:
            seen[k] = True
            k = perm[k]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@lru_cache(maxsize=16)
def signed_permutations(d: int) -> Tuple[Tuple[Tuple[int, ...], int], ...]:
    """All permutations of 0..d-1 paired with their signs."""
    return tuple((p, permutation_sign(p)) for p in permutations(range(d)))


@lru_cache(maxsize=64)
def orbit_representatives(n: int, d: int) -> np.ndarray:
    """Strictly increasing index tuples, one per orbit of nonzero entries (C(n,d) x d)."""
    reps = np.array(list(combinations(range(n), d)), dtype=np.intp).reshape(-1, d)
    reps.setflags(write=False)
    return reps


def antisymmetrize(x: ArrayLike, method: str = "orbit") -> DenseTensor:
    """
    Apply the antisymmetrizer (signed average over all index permutations).

    Args:
        x: Tensor with all dimensions equal and order >= 2
        method: "orbit" evaluates one sorted representative per orbit and fans
            out with signs, costing O(d! * C(n, d)); "direct" sums all d!
            transposed copies, costing O(d! * n^d)

    Returns:
        Antisymmetric DenseTensor; entries with a repeated index are exactly 0
        for the orbit method

    Raises:
        InvalidShapeError: If dimensions differ or order < 2
    """
    arr = _as_array(x)
    if arr.ndim < 2:
        raise InvalidShapeError("antisymmetrizer needs order >= 2")
    if len(set(arr.shape)) != 1:
        raise InvalidShapeError(f"antisymmetrizer needs equal dimensions, got {arr.shape}")
    n, d = arr.shape[0], arr.ndim
    scale = 1.0 / math.factorial(d)
    perms = signed_permutations(d)

    if method == "direct":
        out = np.zeros_like(arr)
        for perm, sign in perms:
            out += sign * np.transpose(arr, perm)
        return DenseTensor._wrap(out * scale)
    if method != "orbit":
        raise ValueError(f"unknown antisymmetrizer method: {method}")

    out = np.zeros_like(arr)
    if n < d:
        return DenseTensor._wrap(out)
    reps = orbit_representatives(n, d)
    values = np.zeros(reps.shape[0])
    for perm, sign in perms:
        values += sign * arr[tuple(reps[:, list(perm)].T)]
    values *= scale
    for perm, sign in perms:
        out[tuple(reps[:, list(perm)].T)] = sign * values
    return DenseTensor._wrap(out)


def default_tolerance(x: ArrayLike) -> float:
    """Default tolerance for structural checks: 1e-12 * max(1, ||x||)."""
    return 1e-12 * max(1.0, float(np.linalg.norm(_as_array(x).ravel())))


def is_antisymmetric(a: ArrayLike, tol: Optional[float] = None) -> bool:
    """
    Check antisymmetry under the d-1 adjacent transpositions of index positions.

    Adjacent transpositions generate the symmetric group, so this is equivalent
    to checking every permutation.

    Args:
        a: Tensor to check
        tol: Absolute tolerance; defaults to 1e-12 * max(1, ||a||)

    Returns:
        True if antisymmetric within tol; False for unequal dimensions
    """
    arr = _as_array(a)
    if len(set(arr.shape)) != 1:
        return False
    if tol is None:
        tol = default_tolerance(arr)
    for k in range(arr.ndim - 1):
        deviation = np.max(np.abs(np.swapaxes(arr, k, k + 1) + arr))
        if deviation > tol:
            return False
    return True


def matricize(x: ArrayLike, mu: int) -> Matricization:
    """
    Mode-mu matricization: rows indexed by i_mu, columns by the remaining
    indices with the lowest mode varying fastest.

    Raises:
        InvalidShapeError: If mu is out of range
    """
    arr = _as_array(x)
    _check_mode(arr.ndim, mu)
    matrix = np.reshape(np.moveaxis(arr, mu, 0), (arr.shape[mu], -1), order="F")
    return Matricization(modes=(mu,), matrix=matrix)


def fold(matrix: np.ndarray, mu: int, dims: Sequence[int]) -> DenseTensor:
    """Inverse of `matricize`: reshape a mode-mu matricization back to `dims`."""
    dims = tuple(dims)
    _check_mode(len(dims), mu)
    rest = dims[:mu] + dims[mu + 1:]
    expected = (dims[mu], int(np.prod(rest)) if rest else 1)
    if matrix.shape != expected:
        raise InvalidShapeError(f"matrix shape {matrix.shape} does not fold to {dims}")
    arr = np.reshape(matrix, (dims[mu],) + rest, order="F")
    return DenseTensor._wrap(np.array(np.moveaxis(arr, 0, mu)))


def matricize_12(x: ArrayLike) -> Matricization:
    """
    (0,1)-matricization of an order-4 tensor: n1*n2 x n3*n4 matrix with row
    j(i1, i2) and column j(i3, i4).

    Raises:
        InvalidShapeError: If the tensor is not of order 4
    """
    arr = _as_array(x)
    if arr.ndim != 4:
        raise InvalidShapeError(f"(1,2)-matricization needs order 4, got {arr.ndim}")
    n1, n2, n3, n4 = arr.shape
    return Matricization(modes=(0, 1), matrix=np.reshape(arr, (n1 * n2, n3 * n4), order="F"))


def mode_product(x: ArrayLike, m: np.ndarray, mu: int) -> DenseTensor:
    """
    Mode-mu product X x_mu M.

    A matrix M (p x n_mu) replaces dimension mu by p so that
    (X x_mu M)_(mu) = M X_(mu). A 1-D vector contracts mode mu away and
    lowers the order by one.

    Raises:
        InvalidShapeError: On shape mismatch or when contracting an order-1 tensor
    """
    arr = _as_array(x)
    _check_mode(arr.ndim, mu)
    m = np.asarray(m, dtype=np.float64)
    if m.ndim == 1:
        if m.shape[0] != arr.shape[mu]:
            raise InvalidShapeError(
                f"vector length {m.shape[0]} does not match dimension {arr.shape[mu]}"
            )
        if arr.ndim == 1:
            raise InvalidShapeError("contraction would give a scalar; use multilinear_form")
        return DenseTensor._wrap(np.tensordot(m, arr, axes=(0, mu)))
    if m.ndim != 2 or m.shape[1] != arr.shape[mu]:
        raise InvalidShapeError(
            f"matrix of shape {m.shape} cannot act on mode {mu} of size {arr.shape[mu]}"
        )
    return DenseTensor._wrap(np.moveaxis(np.tensordot(m, arr, axes=(1, mu)), 0, mu))


def multi_mode_product(
    x: ArrayLike,
    matrices: Sequence[Optional[np.ndarray]],
    transpose: bool = False,
) -> DenseTensor:
    """
    Apply one matrix per mode; `None` entries leave a mode untouched.

    Args:
        x: Tensor of order len(matrices)
        matrices: Per-mode matrices
        transpose: Apply M^T instead of M in every mode

    Returns:
        X x_0 M_0 x_1 M_1 ... (skipping None)
    """
    arr = _as_array(x)
    if len(matrices) != arr.ndim:
        raise InvalidShapeError(f"expected {arr.ndim} matrices, got {len(matrices)}")
    for mu, m in enumerate(matrices):
        if m is None:
            continue
        m = np.asarray(m, dtype=np.float64)
        op = m.T if transpose else m
        if op.shape[1] != arr.shape[mu]:
            raise InvalidShapeError(
                f"matrix of shape {op.shape} cannot act on mode {mu} of size {arr.shape[mu]}"
            )
        arr = np.moveaxis(np.tensordot(op, arr, axes=(1, mu)), 0, mu)
    return DenseTensor._wrap(np.array(arr))


def tucker_project(a: ArrayLike, u: np.ndarray) -> DenseTensor:
    """Core A x_0 U^T x_1 U^T ... x_{d-1} U^T for a shared factor U (n x r)."""
    arr = _as_array(a)
    return multi_mode_product(arr, [u] * arr.ndim, transpose=True)


def tucker_expand(core: ArrayLike, u: np.ndarray) -> DenseTensor:
    """Tensor S x_0 U x_1 U ... x_{d-1} U for a shared factor U (n x r)."""
    arr = _as_array(core)
    return multi_mode_product(arr, [u] * arr.ndim)


def multilinear_form(a: ArrayLike, vectors: Sequence[np.ndarray]) -> float:
    """Full contraction A x_0 v_0^T x_1 v_1^T ... x_{d-1} v_{d-1}^T."""
    arr = _as_array(a)
    if len(vectors) != arr.ndim:
        raise InvalidShapeError(f"expected {arr.ndim} vectors, got {len(vectors)}")
    out = arr
    for v in reversed(vectors):
        out = out @ np.asarray(v, dtype=np.float64)
    return float(out)


def contract_except(a: ArrayLike, vectors: Sequence[np.ndarray], mu: int) -> np.ndarray:
    """Vector A x_{nu != mu} v_nu^T (every mode contracted except mu)."""
    arr = _as_array(a)
    _check_mode(arr.ndim, mu)
    out = arr
    for nu in range(arr.ndim - 1, -1, -1):
        if nu == mu:
            continue
        out = np.tensordot(out, np.asarray(vectors[nu], dtype=np.float64), axes=(nu, 0))
    return np.asarray(out)


def frobenius_norm(x: ArrayLike) -> float:
    return float(np.linalg.norm(_as_array(x).ravel()))


def inner(x: ArrayLike, y: ArrayLike) -> float:
    """Frobenius inner product; raises InvalidShapeError on dimension mismatch."""
    _check_same_dims(x, y)
    return float(np.vdot(_as_array(x).ravel(), _as_array(y).ravel()))


def rotate_inplace(arr: np.ndarray, i: int, j: int, c: float, s: float) -> None:
    """
    In-place A <- A x_mu R^T for every mode mu, with R = R(i, j, phi),
    c = cos(phi), s = sin(phi). Only hyperplanes with index i or j change.
    """
    full = slice(None)
    for mu in range(arr.ndim):
        idx_i = (full,) * mu + (i,)
        idx_j = (full,) * mu + (j,)
        xi = arr[idx_i].copy()
        xj = arr[idx_j]
        arr[idx_i] = c * xi + s * xj
        arr[idx_j] = c * xj - s * xi


def apply_rotation(a: ArrayLike, r: Rotation) -> DenseTensor:
    """
    Rotated tensor A x_0 R^T x_1 R^T ... x_{d-1} R^T, touching only the 2d
    hyperplanes that carry index i or j.

    Raises:
        InvalidShapeError: If dimensions differ or rotation indices are out of range
    """
    arr = _as_array(a)
    if len(set(arr.shape)) != 1:
        raise InvalidShapeError(f"rotation needs equal dimensions, got {arr.shape}")
    r._check_size(arr.shape[0])
    out = np.array(arr)
    rotate_inplace(out, r.i, r.j, r.cos, r.sin)
    return DenseTensor._wrap(out)


def unit_tensor_product(vectors: List[np.ndarray]) -> DenseTensor:
    """Outer product v_0 (x) v_1 (x) ... (x) v_{d-1}."""
    out = np.asarray(vectors[0], dtype=np.float64)
    for v in vectors[1:]:
        out = np.multiply.outer(out, np.asarray(v, dtype=np.float64))
    return DenseTensor._wrap(np.array(out))
