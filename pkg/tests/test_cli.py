import csv
import io
import json
import subprocess
import sys

import pytest

from orbitq.cli import COMMANDS, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


SMOKE = [
    ("roots", "--algebra", "B2", "--levi", "1"),
    ("verma-act", "--depth", "3", "--generator", "e1"),
    ("verma-act", "--depth", "2", "--generator", "e1", "--rescaled"),
    ("shapovalov", "--depth", "3"),
    ("hilbert", "--degree", "2"),
    ("hilbert", "--degree", "2", "--lambda", "3", "--h", "1/2"),
    ("flatness", "--degree", "2"),
    ("poisson", "--algebra", "A2"),
    ("multiplicity", "--lambda", "7/2", "--h", "1/3", "--degree", "2"),
    ("orbit-dim", "--lambda", "3", "--degree", "2"),
    ("q-hilbert", "--degree", "1"),
    ("gq", "--lattice-factor", "2"),
    ("equivariance", "--seed", "1"),
    ("bracket2",),
]


def test_every_subcommand_is_exercised():
    assert {argv[0] for argv in SMOKE} | {"verify-all"} == set(COMMANDS)


@pytest.mark.parametrize("argv", SMOKE, ids=lambda a: " ".join(a))
def test_subcommands_succeed_with_schema(capsys, argv):
    code, data = run_json(capsys, *argv)
    assert code == 0
    assert data["schema"] == 1
    assert data["command"] == argv[0]
    assert data["status"] in ("pass", "skipped")


def test_hilbert_table(capsys):
    code, data = run_json(capsys, "hilbert", "--algebra", "A1", "--levi", "", "--degree", "3")
    assert code == 0
    assert [row["rank"] for row in data["result"]["table"]] == [1, 5, 14, 30]


def test_specialized_hilbert_is_the_fiber(capsys):
    code, data = run_json(capsys, "hilbert", "--degree", "2", "--lambda", "7/2", "--h", "1/3")
    assert code == 0
    assert [row["rank"] for row in data["result"]["table"]] == [1, 4, 9]


def test_csv_output(capsys):
    code, out, _ = run(capsys, "hilbert", "--degree", "2", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["degree", "rank"]
    assert rows[1:] == [["0", "1"], ["1", "5"], ["2", "14"]]
    code, out, _ = run(capsys, "poisson", "--format", "csv")
    assert out.splitlines()[0] == "command,status"


def test_text_output_and_file(capsys, tmp_path):
    code, out, _ = run(capsys, "poisson")
    assert code == 0 and "pass" in out
    target = tmp_path / "out.json"
    code, out, _ = run(capsys, "roots", "--format", "json", "--output", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["schema"] == 1


def test_json_is_byte_identical_across_runs(capsys):
    argv = ("flatness", "--algebra", "A2", "--levi", "1", "--degree", "1", "--format", "json")
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second


@pytest.mark.parametrize("argv", [
    ("hilbert", "--levi", "5"),
    ("hilbert", "--algebra", "G2"),
    ("hilbert", "--algebra", "Z9"),
    ("hilbert", "--lambda", "0"),
    ("multiplicity", "--lambda", "0"),
    ("multiplicity", "--lambda", "2", "--h", "0"),
    ("hilbert", "--lambda", "1,2,3"),
    ("hilbert", "--degree", "-1"),
    ("hilbert", "--bogus"),
    ("frobnicate",),
    ("gq", "--algebra", "A2"),
    ("gq", "--lattice-factor", "3"),
    ("bracket2", "--t-order", "1"),
], ids=lambda a: " ".join(a))
def test_invalid_input_exits_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "error" in err


def test_inconclusive_exits_3(capsys):
    # a depth cap too small for the adaptive depth search to stabilize
    code, data = run_json(capsys, "hilbert", "--depth", "6", "--degree", "3")
    assert code == 3
    assert data["status"] == "inconclusive"


def test_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("ORBITQ_SEED", "7")
    code, data = run_json(capsys, "flatness", "--degree", "1")
    assert code == 0
    assert data["config"]["seed"] == 7


def test_verify_all_skips_quantum_checks_at_t_order_zero(capsys):
    code, data = run_json(capsys, "verify-all", "--algebra", "A2", "--t-order", "0")
    assert code == 0
    status = {c["name"]: c["status"] for c in data["result"]["checks"]}
    assert any(s == "skipped" for s in status.values())
    assert all(s in ("pass", "skipped") for s in status.values())
    code, out, _ = run(capsys, "verify-all", "--algebra", "A2", "--t-order", "0", "--format", "csv")
    assert out.splitlines()[0] == "check,status"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "orbitq", "roots", "--format", "json"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["schema"] == 1
    proc = subprocess.run([sys.executable, "-m", "orbitq", "hilbert", "--lambda", "0"], capture_output=True, text=True)
    assert proc.returncode == 2
