"""Tests for the command-line front end."""

import json
import logging

import pytest

from antisym_lowrank.cli import EXIT_DOMAIN, EXIT_NOT_CONVERGED, EXIT_OK, EXIT_USAGE, main
from antisym_lowrank.core.experiment import TRIAL_COLUMNS
from antisym_lowrank.core.results import TRACE_COLUMNS
from antisym_lowrank.utils.tensor_io import read_tensor, write_tensor
from antisym_lowrank.utils.trace_io import read_rows


@pytest.fixture(autouse=True)
def reset_logging():
    yield
    logger = logging.getLogger("antisym_lowrank")
    for handler in list(logger.handlers):
        logger.removeHandler(handler)


@pytest.fixture
def tensor_file(tmp_path, antisym3):
    path = tmp_path / "a.txt"
    write_tensor(path, antisym3)
    return str(path)


def test_gen_random(tmp_path, capsys):
    """gen writes a random antisymmetric tensor."""
    out = tmp_path / "gen.txt"
    code = main(["gen", "random", "--n", "6", "--d", "3", "--seed", "4", "--output", str(out)])
    assert code == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["seed"] == 4
    assert payload["norm"] == pytest.approx(read_tensor(out).norm())


def test_gen_is_reproducible(tmp_path, capsys):
    """The same seed writes the same file."""
    args = ["gen", "random", "--n", "5", "--d", "3", "--seed", "9", "--output"]
    main(args + [str(tmp_path / "x.txt")])
    main(args + [str(tmp_path / "y.txt")])
    assert (tmp_path / "x.txt").read_text() == (tmp_path / "y.txt").read_text()


def test_gen_function_bad_order(tmp_path, capsys):
    """The function family rejects unsupported orders."""
    code = main(["gen", "function", "--n", "6", "--d", "5", "--output", str(tmp_path / "f.txt")])
    assert code == EXIT_DOMAIN
    assert "ParameterError" in capsys.readouterr().err


def test_rank(tensor_file, capsys):
    """rank reports the multilinear rank."""
    assert main(["rank", tensor_file]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["rank"] == 6


def test_rank_csv(tensor_file, capsys):
    """rank writes the singular values as CSV."""
    assert main(["rank", tensor_file, "--format", "csv"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "index,singular_value"
    assert len(lines) == 7


def test_jacobi_with_trace_and_output(tmp_path, tensor_file, capsys):
    """jacobi writes the result JSON and the trace CSV."""
    trace = tmp_path / "trace.csv"
    approx = tmp_path / "approx.txt"
    code = main(
        ["jacobi", tensor_file, "--rank", "3", "--trace", str(trace), "--output", str(approx)]
    )
    assert code == EXIT_OK
    payload = json.loads(capsys.readouterr().out)
    assert payload["solver"] == "jacobi"
    assert payload["status"] == "converged"
    rows = read_rows(trace)
    assert list(rows[0]) == list(TRACE_COLUMNS)
    assert read_tensor(approx).dims == (6, 6, 6)


def test_hosvd_and_hooi(tensor_file, capsys):
    """hosvd and hooi both succeed on a small tensor."""
    assert main(["hosvd", tensor_file, "--rank", "3"]) == EXIT_OK
    hosvd = json.loads(capsys.readouterr().out)
    assert main(["hooi", tensor_file, "--rank", "3", "--init", "identity"]) == EXIT_OK
    hooi = json.loads(capsys.readouterr().out)
    assert hooi["metadata"]["init"] == "identity"
    assert hosvd["approximation"]["rank"] == hooi["approximation"]["rank"] == 3


def test_rankd(tensor_file, capsys):
    """rankd returns a rank-d approximation."""
    assert main(["rankd", tensor_file]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["approximation"]["rank"] == 3


def test_strict_non_convergence(tensor_file, capsys):
    """--strict turns a capped run into a nonzero exit."""
    code = main(["jacobi", tensor_file, "--rank", "3", "--max-iters", "1", "--strict"])
    assert code == EXIT_NOT_CONVERGED


def test_missing_file_is_usage_error(tmp_path, capsys):
    """A missing input file is a usage error."""
    assert main(["rank", str(tmp_path / "missing.txt")]) == EXIT_USAGE
    assert "not found" in capsys.readouterr().err


def test_malformed_file_is_usage_error(tmp_path, capsys):
    """An unparsable input file is a usage error."""
    path = tmp_path / "bad.txt"
    path.write_text("tensor 2 2 2\n1 2 3\n")
    assert main(["rank", str(path)]) == EXIT_USAGE


def test_non_antisymmetric_is_domain_error(tmp_path, general_tensor, capsys):
    """A general tensor exits with the domain code."""
    path = tmp_path / "g.txt"
    write_tensor(path, general_tensor)
    assert main(["jacobi", str(path), "--rank", "2"]) == EXIT_DOMAIN
    assert "StructureError" in capsys.readouterr().err


def test_argparse_errors(capsys):
    """Missing arguments and unknown commands are usage errors."""
    assert main(["jacobi"]) == EXIT_USAGE
    assert main(["frobnicate"]) == EXIT_USAGE


def test_bad_threads_and_log_level(tensor_file, capsys):
    """Nonpositive thread counts and unknown log levels are usage errors."""
    assert main(["rank", tensor_file, "--threads", "0"]) == EXIT_USAGE
    assert main(["rank", tensor_file, "--log-level", "loud"]) == EXIT_USAGE


def test_experiment(tmp_path, capsys):
    """experiment writes its summary to the output directory."""
    config = tmp_path / "batch.yaml"
    config.write_text("n: 6\nd: 3\nranks: [3]\ntrials: 2\nalgorithms: [hosvd, jacobi]\n")
    out = tmp_path / "results"
    code = main(["experiment", str(config), "--output-dir", str(out), "--format", "csv"])
    assert code == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == ",".join(TRIAL_COLUMNS)
    assert len(lines) == 5
    assert (out / "summary.json").exists()


def test_experiment_invalid_config(tmp_path, capsys):
    """An invalid experiment config is a usage error."""
    config = tmp_path / "batch.json"
    config.write_text(json.dumps({"n": 6, "d": 3, "ranks": [4]}))
    assert main(["experiment", str(config), "--output-dir", str(tmp_path)]) == EXIT_USAGE
    assert "rank 4" in capsys.readouterr().err


def test_compare_inits(tmp_path, slater4, capsys):
    """compare-inits reports both starts."""
    a, _ = slater4
    path = tmp_path / "b.txt"
    write_tensor(path, a)
    trace = tmp_path / "compare.csv"
    assert main(["compare-inits", str(path), "--trace", str(trace), "--strict"]) == EXIT_OK
    assert set(json.loads(capsys.readouterr().out)) == {"hosvd", "kofidis"}
    assert list(read_rows(trace)[0]) == ["iteration", "error_hosvd", "error_kofidis"]


def test_compare_inits_wrong_order(tensor_file, capsys):
    """compare-inits needs an order-4 tensor."""
    assert main(["compare-inits", tensor_file]) == EXIT_DOMAIN


def test_random_init_uses_seed(tensor_file, capsys):
    """--init random draws a reproducible start from --seed."""
    args = ["jacobi", tensor_file, "--rank", "3", "--init", "random", "--seed", "3"]
    assert main(args) == EXIT_OK
    first = json.loads(capsys.readouterr().out)
    assert main(args) == EXIT_OK
    second = json.loads(capsys.readouterr().out)
    assert first["metadata"]["init"] == "explicit"
    assert first["approximation"]["factor"] == second["approximation"]["factor"]
    assert main(["hooi", tensor_file, "--rank", "3", "--init", "random", "--seed", "3"]) == EXIT_OK


def test_random_init_rank_out_of_range(tensor_file, capsys):
    """An unattainable rank with a random start is a domain error."""
    assert main(["hooi", tensor_file, "--rank", "9", "--init", "random"]) == EXIT_DOMAIN


@pytest.mark.parametrize(
    "argv",
    [
        ["hosvd", "--rank", "3", "--seed", "1"],
        ["jacobi", "--rank", "3", "--seed", "1"],
        ["rank", "--seed", "1"],
        ["jacobi", "--rank", "3", "--threads", "2"],
        ["rankd", "--threads", "2"],
    ],
)
def test_unused_global_flags_are_rejected(tensor_file, capsys, argv):
    """--seed and --threads are refused by commands that would ignore them."""
    assert main(argv[:1] + [tensor_file] + argv[1:]) == EXIT_USAGE
    err = capsys.readouterr().err
    assert "--seed" in err or "--threads" in err
