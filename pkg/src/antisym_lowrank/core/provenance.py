"""Run provenance for reproducible experiments.

Every experiment summary carries a provenance record so a run can be
replayed (same config hash, same seeds) and compared across machines.

Usage:
    from antisym_lowrank.core.provenance import create_provenance, hash_tensor

    provenance = create_provenance(config.to_dict(), seed_base=config.seed_base)
    summary["provenance"] = provenance.to_dict()
"""

import hashlib
import json
import uuid
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from typing import Any, Dict, Optional

import numpy as np
import scipy

from antisym_lowrank.core.tensor import ArrayLike, _as_array


@dataclass
class RunProvenance:
    """Identity and environment of an experiment run."""

    run_id: str
    timestamp: str
    config_hash: str
    seed_base: int = 0
    package_version: str = ""
    numpy_version: str = ""
    scipy_version: str = ""
    command: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for JSON serialization."""
        return {k: v for k, v in asdict(self).items() if v is not None}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunProvenance":
        return cls(**{k: v for k, v in data.items() if k in cls.__dataclass_fields__})


def canonical_json(data: Dict[str, Any]) -> str:
    """
    Canonical JSON for hashing: sorted keys, no whitespace, str() for
    non-JSON types.
    """
    return json.dumps(data, sort_keys=True, default=str, separators=(",", ":"))


def hash_content(content: str) -> str:
    """16-char SHA-256 prefix of a string."""
    return hashlib.sha256(content.encode("utf-8")).hexdigest()[:16]


def hash_dict(data: Dict[str, Any]) -> str:
    """Deterministic hash of a dictionary, independent of key order."""
    return hash_content(canonical_json(data))


def hash_tensor(x: ArrayLike) -> str:
    """
    Fingerprint of a tensor's dimensions and exact float64 entries.

    Two tensors hash equal iff they are bitwise identical, which makes
    seeded regeneration checkable.
    """
    arr = np.asarray(_as_array(x), dtype=np.float64)
    digest = hashlib.sha256()
    digest.update(repr(arr.shape).encode("ascii"))
    digest.update(np.ravel(arr, order="F").tobytes())
    return digest.hexdigest()[:16]


def create_provenance(
    config: Dict[str, Any],
    seed_base: int = 0,
    command: Optional[str] = None,
    run_id: Optional[str] = None,
) -> RunProvenance:
    """
    Create a provenance record for an experiment run.

    Args:
        config: Experiment configuration as a dictionary
        seed_base: First trial seed
        command: CLI subcommand that started the run
        run_id: Optional explicit run ID

    Returns:
        RunProvenance with versions and the canonical config hash
    """
    from antisym_lowrank import __version__

    return RunProvenance(
        run_id=run_id or str(uuid.uuid4()),
        timestamp=datetime.now(timezone.utc).isoformat(),
        config_hash=hash_dict(config),
        seed_base=seed_base,
        package_version=__version__,
        numpy_version=np.__version__,
        scipy_version=scipy.__version__,
        command=command,
    )
