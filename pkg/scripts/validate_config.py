#!/usr/bin/env python3
"""CLI tool for validating antisym-lowrank experiment configuration files.

Usage:
    python scripts/validate_config.py batch.yaml
    python scripts/validate_config.py --env  # Uses ANTISYM_LOWRANK_CONFIG

Exit codes:
    0 - Valid configuration
    1 - Validation errors
    2 - File not found or parse error
"""

import argparse
import sys
from pathlib import Path

# Add src to path for development
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from antisym_lowrank.core.validation import validate_experiment_config  # noqa: E402
from antisym_lowrank.utils.config_loader import load_config  # noqa: E402


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        description="Validate antisym-lowrank experiment configuration files",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
    %(prog)s batch.yaml                     # Validate specific file
    %(prog)s --env                          # Use ANTISYM_LOWRANK_CONFIG env var
    %(prog)s batch.yaml --strict            # Treat warnings as errors
    %(prog)s batch.yaml --quiet             # Only show errors
        """,
    )
    parser.add_argument("config_file", nargs="?", help="Path to configuration file (YAML or JSON)")
    parser.add_argument(
        "--env",
        action="store_true",
        help="Load config from the ANTISYM_LOWRANK_CONFIG environment variable",
    )
    parser.add_argument("--strict", action="store_true", help="Treat warnings as errors")
    parser.add_argument(
        "--quiet", "-q",
        action="store_true",
        help="Only show errors, not warnings or success messages",
    )
    args = parser.parse_args(argv)

    if args.env:
        config_path = None
    elif args.config_file:
        config_path = args.config_file
    else:
        parser.error("Either config_file or --env is required")

    try:
        config = load_config(config_path)
    except FileNotFoundError as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return 2
    except Exception as e:
        print(f"ERROR: Failed to parse config: {e}", file=sys.stderr)
        return 2

    result = validate_experiment_config(config)
    for error in result.errors:
        print(f"ERROR: {error}", file=sys.stderr)
    if not args.quiet:
        for warning in result.warnings:
            print(f"WARNING: {warning}", file=sys.stderr)

    if result.errors:
        return 1
    if result.warnings and args.strict:
        print("FAILED: Warnings treated as errors (--strict)", file=sys.stderr)
        return 1
    if not args.quiet:
        cfg = result.config
        print(
            f"OK: Configuration valid. family={cfg.family} n={cfg.n} d={cfg.d} "
            f"algorithms={cfg.algorithms} ranks={cfg.ranks} trials={cfg.trials}"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
