import json
import subprocess
import sys

import pytest

from tesslab.cli import main
from tesslab.covers import loads_cover, is_valid_total_cover
from tesslab.graph import add_universal, complete_graph, cycle_graph, path_graph, write_graph


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, g in {
        "c9": cycle_graph(9),
        "wheel": add_universal(cycle_graph(5))[0],
        "k2": complete_graph(2),
        "k3": complete_graph(3),
        "p3": path_graph(3),
    }.items():
        paths[name] = tmp_path / f"{name}.col"
        write_graph(g, paths[name])
    return paths


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr()


def test_solve_c9(files, tmp_path, capsys):
    witness = tmp_path / "w.json"
    code, out = run(capsys, "solve", files["c9"], "--total", "--witness", witness)
    assert code == 0 and "T_t = 3" in out.out
    cover = loads_cover(witness.read_text())
    assert is_valid_total_cover(cycle_graph(9), cover)
    code, out = run(capsys, "validate", files["c9"], witness)
    assert code == 0 and out.out.strip() == "VALID"


def test_solve_wheel_unsat(files, capsys):
    code, out = run(capsys, "solve", files["wheel"], "--total", "--k", "3")
    assert code == 1 and out.out.strip() == "UNSAT"
    code, out = run(capsys, "solve", files["wheel"], "--total", "--k", "3", "--backend", "dpll")
    assert code == 1 and out.out.strip() == "UNSAT"
    code, out = run(capsys, "solve", files["wheel"], "--total", "--backend", "cadical153")
    assert code == 0 and out.out.startswith("T_t = 4")


def test_solve_json_round_trips(files, capsys):
    code, out = run(capsys, "solve", files["k3"], "--total", "--k", "3")
    assert code == 0
    text = out.out.split("\n", 1)[1]
    from tesslab.covers import dumps_cover

    assert dumps_cover(loads_cover(text)) == text


def test_cnf_export(files, tmp_path, capsys):
    cnf = tmp_path / "k2.cnf"
    code, _ = run(capsys, "solve", files["k2"], "--total", "--k", "3", "--cnf", cnf)
    assert code == 0 and "p cnf" in cnf.read_text()


def test_plain_solve(files, capsys):
    code, out = run(capsys, "solve", files["c9"])
    assert code == 0 and out.out.startswith("T = 3")


def test_validate_invalid(files, tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"k": 3, "colors": [1, 2], "tessellations": {"1": [[0, 1]]}}))
    code, out = run(capsys, "validate", files["k2"], bad)
    assert code == 1 and out.out.startswith("INVALID")


def test_io_errors(files, tmp_path, capsys):
    code, out = run(capsys, "validate", tmp_path / "missing.col", tmp_path / "x.json")
    assert code == 2 and "error" in out.err
    junk = tmp_path / "junk.json"
    junk.write_text("{")
    code, _ = run(capsys, "validate", files["k2"], junk)
    assert code == 2


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_analyze_json(files, capsys):
    code, out = run(capsys, "analyze", files["wheel"], "--json")
    assert code == 0
    doc = json.loads(out.out.strip().splitlines()[-1])
    assert doc["is_star"] == 2 and doc["nbr_chi_bound"] == 4


def test_theta_and_classify(files, capsys):
    code, out = run(capsys, "theta", files["c9"])
    assert code == 0 and "certified = false" in out.out
    code, out = run(capsys, "classify", files["c9"], "--type", "2")
    assert code == 0 and "confirmed" in out.out
    code, out = run(capsys, "classify", files["wheel"], "--type", "2")
    assert code == 1 and "REFUTED" in out.out


def test_construct(files, tmp_path, capsys):
    out_graph, out_cover = tmp_path / "h.col", tmp_path / "h.json"
    code, _ = run(capsys, "construct", "universal", "--input", files["k3"], "--out", out_graph, "--cover", out_cover)
    assert code == 0
    code, out = run(capsys, "validate", out_graph, out_cover)
    assert code == 0
    code, out = run(capsys, "construct", "universal")
    assert code == 2
    code, out = run(capsys, "construct", "example3t")
    assert code == 0 and "12 vertices, 24 edges" in out.out
    code, out = run(capsys, "construct", "gadget", "--role", "not_equal", "--check")
    assert code == 0 and "property holds: true" in out.out


def test_walk_csv(files, tmp_path, capsys):
    cover = tmp_path / "k2.json"
    cover.write_text(json.dumps({"k": 3, "colors": [1, 2], "tessellations": {"3": [[0, 1]]}}))
    code, out = run(capsys, "walk", files["k2"], "--cover", cover, "--init", "0", "--steps", "1", "--per-operator")
    assert code == 0
    rows = [line.split(",") for line in out.out.strip().splitlines()]
    assert rows[0] == ["step", "site", "probability"]
    step1 = {site: float(p) for step, site, p in rows[1:] if step == "1"}
    assert step1 == {"0": 0.0, "1": 0.0, "0-1": 1.0}
    code, _ = run(capsys, "walk", files["k2"], "--cover", cover, "--init", "5", "--steps", "1")
    assert code == 2


def test_sweep_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(capsys, "sweep", "--max-n", "5", "--out", a)[0] == 0
    assert run(capsys, "sweep", "--max-n", "5", "--out", b)[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_console_script_entry(files):
    proc = subprocess.run(
        [sys.executable, "-m", "tesslab.cli", "solve", str(files["k2"]), "--total"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0 and proc.stdout.startswith("T_t = 3")
