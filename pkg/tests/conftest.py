"""Test configuration for pytest."""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add src to path for imports
src_path = Path(__file__).parent.parent / "src"
sys.path.insert(0, str(src_path))

# Configure pytest-asyncio
pytest_plugins = ["pytest_asyncio"]

from antisym_lowrank.core.linalg import random_orthonormal  # noqa: E402
from antisym_lowrank.core.tensor import antisymmetrize  # noqa: E402
from antisym_lowrank.problems.generators import random_antisymmetric, slater_tensor  # noqa: E402


@pytest.fixture
def rng():
    """Seeded generator shared by a single test."""
    return np.random.default_rng(20240613)


@pytest.fixture
def antisym3():
    """Random antisymmetric 6 x 6 x 6 tensor."""
    return random_antisymmetric(6, 3, seed=11)


@pytest.fixture
def antisym4():
    """Random antisymmetric 6^4 tensor."""
    return random_antisymmetric(6, 4, seed=12)


@pytest.fixture
def slater4():
    """antisym(7.5 u_0 (x) u_1 (x) u_2 (x) u_3) with orthonormal u_k in R^7, and the u_k."""
    u = random_orthonormal(7, 4, np.random.default_rng(5))
    return slater_tensor([u[:, k] for k in range(4)], alpha=7.5), u


@pytest.fixture
def general_tensor(rng):
    """Random tensor without any symmetry."""
    return rng.random((5, 5, 5))


def antisymmetric_from(rng, n, d):
    return antisymmetrize(rng.standard_normal((n,) * d))
