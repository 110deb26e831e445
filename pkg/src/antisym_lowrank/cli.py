"""Command-line front end.

    antisym-lowrank gen random --n 10 --d 3 --seed 7 --output a.txt
    antisym-lowrank rank a.txt
    antisym-lowrank jacobi a.txt --rank 6 --trace jacobi.csv --output approx.txt
    antisym-lowrank experiment batch.yaml --threads 4
    antisym-lowrank compare-inits b.txt --trace compare.csv

Results go to stdout (JSON, or CSV with --format csv); diagnostics go to
stderr. Exit codes: 0 success, 1 domain error, 2 usage or input error,
3 non-convergence under --strict.
"""

import argparse
import io
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from antisym_lowrank import __version__
from antisym_lowrank.core.base import AntisymError, ApproximationResult, TensorFormatError
from antisym_lowrank.core.results import TRACE_COLUMNS

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2
EXIT_NOT_CONVERGED = 3


class UsageError(Exception):
    """Invalid command-line input detected after argument parsing."""


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--seed", type=int, default=None,
        help="Random seed (default 0); gen, rankd, experiment, compare-inits, --init random",
    )
    common.add_argument(
        "--threads", type=int, default=None, help="Worker threads (experiment only)"
    )
    common.add_argument(
        "--strict", action="store_true", help="Exit with code 3 unless every solver converged"
    )
    common.add_argument("--format", choices=["json", "csv"], default="json", help="stdout format")
    common.add_argument("--log-level", default="WARNING", help="stderr log level")
    return common


def _add_solver_args(p: argparse.ArgumentParser, inits: Sequence[str], needs_rank: bool) -> None:
    p.add_argument("tensor", help="Tensor file")
    if needs_rank:
        p.add_argument("--rank", type=int, required=True, help="Target multilinear rank r")
    p.add_argument("--tol", type=float, default=1e-10, help="Gradient tolerance")
    p.add_argument("--init", choices=list(inits), default=inits[0])
    p.add_argument("--max-iters", type=int, default=None, help="Sweep or accepted-rotation cap")
    p.add_argument("--trace", default=None, help="Write the convergence trace CSV here")
    p.add_argument("--output", default=None, help="Write the reconstructed approximation here")


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="antisym-lowrank",
        description="Low multilinear rank approximation of antisymmetric tensors",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", parents=[common], help="Generate a test tensor")
    gen.add_argument("kind", choices=["random", "function", "groundstate"])
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--d", type=int, required=True)
    gen.add_argument("--cv", type=float, default=100.0, help="Potential strength c_v")
    gen.add_argument("--cw", type=float, default=5.0, help="Interaction strength c_w")
    gen.add_argument("--tol", type=float, default=1e-8, help="Ground-state residual tolerance")
    gen.add_argument("--output", required=True, help="Tensor file to write")

    rank = sub.add_parser("rank", parents=[common], help="Multilinear rank of a tensor file")
    rank.add_argument("tensor")
    rank.add_argument("--tol", type=float, default=None, help="Singular value threshold")

    hosvd = sub.add_parser("hosvd", parents=[common], help="Truncated HOSVD")
    hosvd.add_argument("tensor")
    hosvd.add_argument("--rank", type=int, required=True)
    hosvd.add_argument("--trace", default=None)
    hosvd.add_argument("--output", default=None)

    hooi = sub.add_parser("hooi", parents=[common], help="Higher-order orthogonal iteration")
    _add_solver_args(hooi, ("hosvd", "identity", "random"), needs_rank=True)

    jacobi = sub.add_parser("jacobi", parents=[common], help="Jacobi rotation algorithm")
    _add_solver_args(jacobi, ("hosvd", "identity", "random"), needs_rank=True)
    jacobi.add_argument("--eps-factor", type=float, default=0.1, help="eps = eps_factor / n")

    rankd = sub.add_parser("rankd", parents=[common], help="Rank-d approximation via HOPM")
    _add_solver_args(rankd, ("auto", "hosvd", "kofidis"), needs_rank=False)

    exp = sub.add_parser("experiment", parents=[common], help="Run a batch experiment")
    exp.add_argument("config", nargs="?", default=None, help="JSON or YAML config file")
    exp.add_argument("--output-dir", default=None, help="Override output_dir")
    exp.add_argument("--trials", type=int, default=None, help="Override the trial count")

    cmp_ = sub.add_parser(
        "compare-inits", parents=[common], help="HOPM from HOSVD vs eigenvector init (d = 4)"
    )
    cmp_.add_argument("tensor")
    cmp_.add_argument("--tol", type=float, default=1e-10)
    cmp_.add_argument("--max-iters", type=int, default=1000)
    cmp_.add_argument("--trace", default=None, help="Aligned trace CSV")
    return parser


def _emit(payload: Dict[str, Any], args: argparse.Namespace, csv_rows=None, header=None) -> None:
    if args.format == "csv" and csv_rows is not None:
        import csv

        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(csv_rows)
        sys.stdout.write(buf.getvalue())
    else:
        sys.stdout.write(json.dumps(payload, indent=2, default=str) + "\n")


def _read(path: str):
    from antisym_lowrank.utils.tensor_io import read_tensor

    try:
        return read_tensor(path)
    except FileNotFoundError as e:
        raise UsageError(f"tensor file not found: {path}") from e


def _finish_solver(args: argparse.Namespace, result: ApproximationResult) -> int:
    from antisym_lowrank.utils.tensor_io import write_tensor
    from antisym_lowrank.utils.trace_io import write_trace

    if args.trace:
        write_trace(args.trace, result.trace)
    if args.output:
        write_tensor(args.output, result.approx.reconstruct())
    _emit(result.to_dict(), args, csv_rows=result.trace.rows(), header=TRACE_COLUMNS)
    if args.strict and not result.converged:
        logger.error("%s did not converge: %s", result.solver, result.status.value)
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def cmd_gen(args: argparse.Namespace) -> int:
    from antisym_lowrank.core.provenance import hash_tensor
    from antisym_lowrank.problems import (
        HamiltonianSpec,
        antisym_ground_state,
        function_tensor,
        random_antisymmetric,
    )
    from antisym_lowrank.utils.tensor_io import write_tensor

    seed = 0 if args.seed is None else args.seed
    payload: Dict[str, Any] = {"kind": args.kind, "n": args.n, "d": args.d}
    if args.kind == "random":
        a = random_antisymmetric(args.n, args.d, seed=seed)
        payload["seed"] = seed
    elif args.kind == "function":
        a = function_tensor(args.n, args.d)
    else:
        spec = HamiltonianSpec(d=args.d, n=args.n, c_v=args.cv, c_w=args.cw)
        ground = antisym_ground_state(spec, solver_tol=args.tol, seed=seed)
        a = ground.eigentensor
        payload.update(ground.to_dict())
        payload["seed"] = seed
    write_tensor(args.output, a)
    payload.update({"norm": a.norm(), "hash": hash_tensor(a), "output": args.output})
    _emit(payload, args)
    return EXIT_OK


def cmd_rank(args: argparse.Namespace) -> int:
    from antisym_lowrank.core.rank import multilinear_rank

    report = multilinear_rank(_read(args.tensor), tol=args.tol)
    rows = [[k, s] for k, s in enumerate(report.singular_values)]
    _emit(report.to_dict(), args, csv_rows=rows, header=("index", "singular_value"))
    return EXIT_OK


def cmd_hosvd(args: argparse.Namespace) -> int:
    from antisym_lowrank.solvers import HosvdSolver

    return _finish_solver(args, HosvdSolver().solve(_read(args.tensor), args.rank))


def _solver_init(args: argparse.Namespace, n: int):
    """`--init random` becomes a seeded n x r orthonormal start."""
    if args.init != "random":
        return args.init
    import numpy as np

    from antisym_lowrank.core.base import RankError
    from antisym_lowrank.core.linalg import random_orthonormal

    if not 1 <= args.rank <= n:
        raise RankError(f"rank r={args.rank} outside 1..{n}")
    seed = 0 if args.seed is None else args.seed
    return random_orthonormal(n, args.rank, np.random.default_rng(seed))


def cmd_hooi(args: argparse.Namespace) -> int:
    from antisym_lowrank.solvers import hooi

    a = _read(args.tensor)
    options: Dict[str, Any] = {"grad_tol": args.tol, "init": _solver_init(args, a.dims[0])}
    if args.max_iters is not None:
        options["max_iters"] = args.max_iters
    return _finish_solver(args, hooi(a, args.rank, **options))


def cmd_jacobi(args: argparse.Namespace) -> int:
    from antisym_lowrank.solvers import JacobiSolver

    a = _read(args.tensor)
    options: Dict[str, Any] = {
        "grad_tol": args.tol,
        "init": _solver_init(args, a.dims[0]),
        "eps_factor": args.eps_factor,
    }
    if args.max_iters is not None:
        options["max_pivots"] = args.max_iters
    return _finish_solver(args, JacobiSolver().solve(a, args.rank, **options))


def cmd_rankd(args: argparse.Namespace) -> int:
    from antisym_lowrank.solvers import RankDSolver

    options: Dict[str, Any] = {
        "tol": args.tol,
        "init": args.init,
        "seed": 0 if args.seed is None else args.seed,
    }
    if args.max_iters is not None:
        options["max_iters"] = args.max_iters
    return _finish_solver(args, RankDSolver().solve(_read(args.tensor), **options))


def cmd_experiment(args: argparse.Namespace) -> int:
    from antisym_lowrank.core.experiment import TRIAL_COLUMNS, run_experiment
    from antisym_lowrank.core.validation import validate_experiment_config
    from antisym_lowrank.utils.config_loader import load_config
    from antisym_lowrank.utils.trace_io import read_rows

    try:
        raw = load_config(args.config)
    except (FileNotFoundError, ValueError) as e:
        raise UsageError(str(e)) from e
    overrides = {
        "seed_base": args.seed,
        "threads": args.threads,
        "output_dir": args.output_dir,
        "trials": args.trials,
    }
    raw.update({k: v for k, v in overrides.items() if v is not None})
    result = validate_experiment_config(raw)
    for warning in result.warnings:
        logger.warning(warning)
    if not result.valid:
        raise UsageError("invalid experiment config: " + "; ".join(result.errors))

    summary = run_experiment(result.config, command="experiment")
    rows = None
    if args.format == "csv":
        trials_csv = Path(result.config.output_dir) / "trials.csv"
        rows = [[row[c] for c in TRIAL_COLUMNS] for row in read_rows(trials_csv)]
    _emit(summary.model_dump(), args, csv_rows=rows, header=TRIAL_COLUMNS)
    if args.strict and summary.converged < summary.records:
        logger.error("%d of %d runs did not converge", summary.records - summary.converged, summary.records)
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def cmd_compare_inits(args: argparse.Namespace) -> int:
    from antisym_lowrank.core.experiment import COMPARE_COLUMNS, compare_inits
    from antisym_lowrank.utils.trace_io import write_rows

    seed = 0 if args.seed is None else args.seed
    comparison = compare_inits(_read(args.tensor), tol=args.tol, max_iters=args.max_iters, seed=seed)
    rows = comparison.aligned_rows()
    if args.trace:
        write_rows(args.trace, COMPARE_COLUMNS, rows)
    _emit(comparison.to_dict(), args, csv_rows=rows, header=COMPARE_COLUMNS)
    if args.strict and not (comparison.hosvd.converged and comparison.kofidis.converged):
        return EXIT_NOT_CONVERGED
    return EXIT_OK


SEEDED_COMMANDS = ("gen", "rankd", "experiment", "compare-inits")


def _check_global_flags(args: argparse.Namespace) -> None:
    """Reject --seed and --threads where the command has no use for them."""
    if args.threads is not None:
        if args.threads < 1:
            raise UsageError("--threads must be >= 1")
        if args.command != "experiment":
            raise UsageError("--threads only applies to the experiment command")
    if args.seed is None or args.command in SEEDED_COMMANDS:
        return
    if args.command in ("hooi", "jacobi") and args.init == "random":
        return
    if args.command in ("hooi", "jacobi"):
        raise UsageError(f"--seed needs --init random for {args.command}")
    raise UsageError(f"--seed does not apply to the {args.command} command")


COMMANDS = {
    "gen": cmd_gen,
    "rank": cmd_rank,
    "hosvd": cmd_hosvd,
    "hooi": cmd_hooi,
    "jacobi": cmd_jacobi,
    "rankd": cmd_rankd,
    "experiment": cmd_experiment,
    "compare-inits": cmd_compare_inits,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run one subcommand and return its exit code."""
    from antisym_lowrank.utils.logging_setup import configure_logging

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE
    try:
        configure_logging(args.log_level)
    except ValueError as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        _check_global_flags(args)
        return COMMANDS[args.command](args)
    except (UsageError, TensorFormatError) as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return EXIT_USAGE
    except AntisymError as e:
        print(f"ERROR: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_DOMAIN


def run() -> None:
    """Console script entry point."""
    sys.exit(main())


if __name__ == "__main__":
    run()
