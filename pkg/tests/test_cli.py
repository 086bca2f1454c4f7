import csv
import io
import json

import pytest

from subsetmax.cli import CSV_HEADER, main
from subsetmax.graph import Graph, OrderedGraph
from subsetmax.instances import Instance, attach_function, gen_oriented_cycle, write_instance
from subsetmax.submodular import ModularFunction


def run_cli(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def path_file(tmp_path):
    g = Graph.path(3)
    inst = Instance(g, 1, ordered=OrderedGraph(g, (0, 1, 2), 1),
                    function=ModularFunction([1, 3, 1]))
    p = tmp_path / "path.json"
    write_instance(inst, p)
    return p


def test_gen_writes_and_repeats(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    code, out, _ = run_cli(capsys, "gen", "--class", "interval", "--n", 12, "--count", 50,
                           "--seed", 7, "--out", a)
    assert code == 0 and len(out.splitlines()) == 50
    run_cli(capsys, "gen", "--class", "interval", "--n", 12, "--count", 50, "--seed", 7, "--out", b)
    files = sorted(p.name for p in a.iterdir())
    assert len(files) == 50
    assert all((a / f).read_bytes() == (b / f).read_bytes() for f in files)


def test_usage_errors(tmp_path, capsys):
    assert run_cli(capsys, "gen", "--class", "nonsense", "--n", 3)[0] == 2
    assert run_cli(capsys, "run", tmp_path / "missing.json")[0] == 2
    assert run_cli(capsys)[0] == 2


def test_run_path_instance(path_file, capsys):
    code, out, _ = run_cli(capsys, "run", path_file, "--algo", "pd")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[0]["value"] == "3.0" and rows[0]["opt"] == "3.0" and rows[0]["ratio"] == "1.0"
    assert float(rows[0]["guarantee"]) == pytest.approx(4.0)


def test_run_empty_list(capsys):
    code, out, _ = run_cli(capsys, "run", "--algo", "pd")
    assert code == 0 and out == ",".join(CSV_HEADER) + "\n"


def test_run_reports_incompatible_rows(tmp_path, capsys):
    p = tmp_path / "cycle.json"
    write_instance(attach_function(gen_oriented_cycle(5, 0), "modular", 0), p)
    code, out, err = run_cli(capsys, "run", p, "--algo", "pd", "--algo", "crs-det", "--rounds", 20)
    assert code == 0 and "needs an ordering" in err
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[0]["params"].startswith("error=") and rows[0]["value"] == ""
    assert rows[1]["algorithm"] == "crs-det" and float(rows[1]["value"]) > 0


def test_run_deterministic_and_parallel(tmp_path, capsys, monkeypatch):
    d = tmp_path / "inst"
    run_cli(capsys, "gen", "--class", "degenerate", "--n", 9, "--count", 3, "--seed", 1,
            "--function", "cut", "--out", d)
    files = sorted(d.iterdir())
    args = ["run", *files, "--algo", "pd-nonneg", "--algo", "rgreedy", "--algo", "crs-rand",
            "--trials", 3, "--rounds", 20, "--seed", 5]
    _, first, _ = run_cli(capsys, *args)
    _, second, _ = run_cli(capsys, *args)
    monkeypatch.setenv("SUBSETMAX_THREADS", "3")
    _, third, _ = run_cli(capsys, *args)
    assert first == second == third
    assert len(first.splitlines()) == 1 + 3 * 3 * 3
    _, other, _ = run_cli(capsys, *args[:-1], 6)
    assert other != first


def test_run_json_format(path_file, capsys, tmp_path):
    out = tmp_path / "r.json"
    assert run_cli(capsys, "run", path_file, "--algo", "greedy", "--algo", "pd-mwis",
                   "--format", "json", "--out", out)[0] == 0
    rows = json.loads(out.read_text())
    assert [r["algorithm"] for r in rows] == ["greedy", "pd-mwis"]
    assert all(r["value"] == "3.0" for r in rows)


def test_verify_pass_and_corrupted(tmp_path, capsys):
    d = tmp_path / "inst"
    run_cli(capsys, "gen", "--class", "interval", "--n", 8, "--count", 3, "--seed", 2,
            "--function", "coverage", "--out", d)
    files = sorted(d.iterdir())
    code, out, _ = run_cli(capsys, "verify", *files, "--trials", 5000)
    assert code == 0, out
    # claim k=1 for the natural ordering of a 4-cycle
    g = Graph.cycle(4)
    bad = tmp_path / "bad.json"
    write_instance(Instance(g, 1, ordered=OrderedGraph(g, range(4), 1),
                            function=ModularFunction([1, 1, 1, 1])), bad)
    code, out, _ = run_cli(capsys, "verify", *files, bad, "--suite", "structure")
    assert code == 1
    assert f"FAIL {bad}" in out and "inductive 1-independence" in out
    code, out, _ = run_cli(capsys, "verify", bad, "--suite", "structure", "--format", "json")
    report = json.loads(out)
    assert code == 1 and report["ok"] is False and report["reports"][0]["instance"] == str(bad)


def test_verify_crs_table(tmp_path, capsys):
    p = tmp_path / "cycle.json"
    write_instance(attach_function(gen_oriented_cycle(6, 4), "modular", 0), p)
    code, out, _ = run_cli(capsys, "verify", p, "--suite", "crs-balance", "--trials", 100000)
    assert code == 0
    table = [line.split() for line in out.splitlines() if line.strip().startswith(("det", "rand"))]
    assert len(table) == 12
