"""Experiment config files (YAML or JSON), optionally located through `.env`."""

import json
import os
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Union

import yaml
from dotenv import load_dotenv

CONFIG_ENV_VAR = "ANTISYM_LOWRANK_CONFIG"

_PARSERS: Dict[str, Callable[[str], Any]] = {
    ".yaml": yaml.safe_load,
    ".yml": yaml.safe_load,
    ".json": json.loads,
}


def load_config(config_path: Optional[Union[str, Path]] = None) -> Dict[str, Any]:
    """
    Raw experiment config mapping, validated later by ExperimentConfig.

    Without a path, `.env` in the working directory is read and
    ANTISYM_LOWRANK_CONFIG names the file; an empty mapping means defaults.

    Raises:
        FileNotFoundError: If the named file does not exist
        ValueError: For suffixes other than .yaml, .yml and .json
    """
    if config_path is None:
        load_dotenv(Path.cwd() / ".env")
        config_path = os.environ.get(CONFIG_ENV_VAR)
        if not config_path:
            return {}
    path = Path(config_path)
    parse = _PARSERS.get(path.suffix.lower())
    if parse is None:
        raise ValueError(f"config must be YAML or JSON, got '{path.suffix}'")
    if not path.is_file():
        raise FileNotFoundError(f"config file not found: {path}")
    return parse(path.read_text(encoding="utf-8")) or {}
