import glob
import json
import os

import pytest
from sympy import primerange

from primebound.cli import build_parser, dispatch
from primebound.constants import EXIT_BUDGET, EXIT_FAILURE, EXIT_OK, EXIT_USAGE

GOLDEN_DIR = os.path.join(os.path.dirname(__file__), "testdata", "golden")
GOLDEN_FILES = sorted(glob.glob(os.path.join(GOLDEN_DIR, "*.json")))

NO_MANIFEST = ["--manifest-dir", ""]


def run(capsys, argv):
    code = dispatch(argv)
    return code, capsys.readouterr().out


def parse_output(text):
    if not text:
        return None
    try:
        return json.loads(text)
    except ValueError:
        return [json.loads(line) for line in text.splitlines()]


def lookup(document, path):
    for part in path.split("."):
        document = document[int(part)] if isinstance(document, list) else document[part]
    return document


@pytest.mark.parametrize(
    "golden", GOLDEN_FILES, ids=[os.path.basename(path)[:-5] for path in GOLDEN_FILES]
)
def test_golden(capsys, golden):
    with open(golden) as f:
        expected = json.load(f)
    code, out = run(capsys, NO_MANIFEST + expected["argv"])
    assert code == expected["exit_code"]
    if "stdout" in expected:
        assert out == expected["stdout"]
    document = parse_output(out)
    for path, value in expected.get("exact", {}).items():
        assert lookup(document, path) == value, path
    for path, (value, rel_tol) in expected.get("approx", {}).items():
        assert lookup(document, path) == pytest.approx(value, rel=rel_tol), path


def test_every_subcommand_has_a_golden_file():
    covered = set()
    for golden in GOLDEN_FILES:
        with open(golden) as f:
            argv = json.load(f)["argv"]
        covered.add(" ".join(argv[:2]))

    parser = build_parser()
    groups = parser._subparsers._group_actions[0].choices
    for name, group in groups.items():
        if name == "replay":
            continue
        for command in group._subparsers._group_actions[0].choices:
            assert "{} {}".format(name, command) in covered


@pytest.mark.parametrize(
    "argv",
    [
        ["bound", "thm1", "--n", "2", "--d", "1", "--s", "1", "--primes", "3,5"],
        ["search", "multiperfect", "--ratio", "2", "--limit", "10000"],
        ["sieve", "verify", "--l", "3", "--U", "7,13", "--z", "30", "--interval", "5:4000"],
    ],
)
def test_output_is_deterministic(capsys, argv):
    first = run(capsys, NO_MANIFEST + ["--workers", "1"] + argv)
    second = run(capsys, NO_MANIFEST + ["--workers", "1"] + argv)
    pooled = run(capsys, NO_MANIFEST + ["--workers", "2"] + argv)
    assert first == second == pooled
    assert first[0] == EXIT_OK


def test_usage_errors(capsys):
    assert run(capsys, ["bound", "thm9"])[0] == EXIT_USAGE
    assert run(capsys, NO_MANIFEST + ["search", "multiperfect", "--ratio", "two"]) == (
        EXIT_USAGE,
        "",
    )
    assert run(capsys, NO_MANIFEST + ["bound", "thm2", "--primes", "4"])[0] == EXIT_USAGE


def test_help_exits_cleanly(capsys):
    code, out = run(capsys, ["--help"])
    assert code == EXIT_OK
    assert "search" in out


def test_budget_exceeded(capsys):
    argv = NO_MANIFEST + [
        "--sigma-table-budget",
        "100",
        "search",
        "multiperfect",
        "--ratio",
        "2",
        "--limit",
        "1000",
    ]
    assert run(capsys, argv) == (EXIT_BUDGET, "")


def test_bound_thm1_rejects_basis_beyond_float_range(capsys):
    primes = ",".join(str(p) for p in primerange(3, 1000))
    argv = NO_MANIFEST + ["bound", "thm1", "--n", "2", "--d", "1", "--s", "1", "--primes", primes]
    assert run(capsys, argv) == (EXIT_USAGE, "")


def test_theorem4_construction_rejects_l_2(capsys):
    argv = NO_MANIFEST + ["sieve", "verify", "--construction", "theorem4", "--l", "2", "--z", "7"]
    assert run(capsys, argv)[0] == EXIT_USAGE


def test_config_file(capsys, tmp_path):
    config = tmp_path / "run.env"
    config.write_text("SCAN_LIMIT=10000\nMANIFEST_DIR=\n")
    argv = ["--config", str(config), "search", "multiperfect", "--ratio", "2"]
    code, out = run(capsys, argv)
    assert code == EXIT_USAGE
    assert out == ""

    config.write_text("SCAN_LIMIT=10000\nSEED=3\n")
    code, out = run(capsys, NO_MANIFEST + ["--config", str(config), "search", "multiperfect", "--ratio", "2"])
    assert code == EXIT_OK
    assert [record.get("N") for record in parse_output(out)[:-1]] == [6, 28, 496, 8128]


def test_manifest_and_replay(capsys, tmp_path):
    directory = str(tmp_path / "manifests")
    argv = ["--manifest-dir", directory, "bound", "thm2", "--primes", "3"]
    code, out = run(capsys, argv)
    assert code == EXIT_OK

    (path,) = glob.glob(os.path.join(directory, "*.json"))
    with open(path) as f:
        manifest = json.load(f)
    assert manifest["subcommand"] == "bound thm2"
    assert manifest["argv"] == argv
    assert manifest["parameters"]["primes"] == "3"

    code, replayed = run(capsys, NO_MANIFEST + ["replay", path])
    assert code == EXIT_OK
    assert json.loads(replayed)["match"]

    manifest["outputs"] = "0" * 64
    with open(path, "w") as f:
        json.dump(manifest, f)
    code, replayed = run(capsys, NO_MANIFEST + ["replay", path])
    assert code == EXIT_FAILURE
    assert not json.loads(replayed)["match"]


def test_warnings_go_to_stderr(capsys):
    code = dispatch(NO_MANIFEST + ["bound", "thm1", "--n", "2", "--d", "1", "--s", "1", "--primes", "3"])
    captured = capsys.readouterr()
    assert code == EXIT_OK
    assert "[!] P = 3 is below 21" in captured.err
    assert "[!]" not in captured.out
