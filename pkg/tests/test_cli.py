import csv
import io
import json
import math

import pytest

from kadapt.cli import UsageError, main, parse_values, run_seed, sweep_rows
from kadapt.model import Constraint, FiniteInstance, Scenario, YSpace
from kadapt.serialization import dumps


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def _builtin(tmp_path, capsys, name):
    path = tmp_path / "inst.json"
    code, _, _ = _run(capsys, "generate", "builtin", "--name", name, "-o", str(path))
    assert code == 0
    return path


def test_generate_knapsack_roundtrip(tmp_path, capsys):
    path = tmp_path / "k.json"
    code, out, _ = _run(capsys, "generate", "knapsack", "--n", "5", "--t", "4", "--seed", "3", "-o", str(path))
    assert code == 0 and out.startswith("knapsack n_y=5 t=4")
    doc = json.loads(path.read_text())
    assert doc["schema_version"] and len(doc["scenarios"]) == 4
    code, out2, _ = _run(capsys, "generate", "knapsack", "--n", "5", "--t", "4", "--seed", "3")
    assert json.loads(out2) == doc


def test_generate_setcover(tmp_path, capsys):
    subsets = tmp_path / "s.json"
    subsets.write_text("[[0, 1], [1, 2], [2]]")
    path = tmp_path / "sc.json"
    code, out, _ = _run(capsys, "generate", "setcover", "--universe", "3", "--subsets", str(subsets), "-o", str(path))
    assert code == 0 and "t=3" in out
    code, out, _ = _run(capsys, "solve", str(path), "--oracle")
    assert "k_opt=2" in out


def test_generate_rejects_bad_input(tmp_path, capsys):
    subsets = tmp_path / "s.json"
    subsets.write_text("[[0], [1]]")
    code, _, err = _run(capsys, "generate", "setcover", "--universe", "3", "--subsets", str(subsets))
    assert code == 2 and "error" in err
    assert _run(capsys, "generate", "builtin", "--name", "nope")[0] == 2
    assert _run(capsys, "generate", "knapsack", "--n", "0", "--t", "3")[0] == 2


def test_solve_simplex(tmp_path, capsys):
    path = _builtin(tmp_path, capsys, "simplex-units(3)")
    code, out, _ = _run(capsys, "solve", str(path), "--oracle")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "v*=1/3 k_lb=2 k_ub=3 k_opt=3"
    assert lines[1].startswith("policy 0: y=[0, 0, 1] covers 4")
    code, out, _ = _run(capsys, "solve", str(path), "--json")
    doc = json.loads(out)
    assert doc["k_lb"] == 2 and doc["k_ub"] == 3 and doc["v_star"] == "1/3"
    code, out, _ = _run(capsys, "solve", str(path), "--float")
    assert out.startswith("v*=0.333")


def test_solve_band(tmp_path, capsys):
    path = _builtin(tmp_path, capsys, "cardinality-band(4)")
    code, out, _ = _run(capsys, "solve", str(path), "--oracle")
    assert out.splitlines()[0] == "v*=0 k_lb=4 k_ub=4 k_opt=4"


def test_solve_infeasible_exit_3(tmp_path, capsys):
    inst = FiniteInstance(YSpace.binary(1), [Scenario([1], [Constraint([1], ">=", 2)])])
    path = tmp_path / "bad.json"
    path.write_text(dumps(inst))
    code, _, err = _run(capsys, "solve", str(path))
    assert code == 3 and "infeasible" in err


def test_solve_missing_or_malformed(tmp_path, capsys):
    assert _run(capsys, "solve", str(tmp_path / "none.json"))[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"kind": "finite"}')
    assert _run(capsys, "solve", str(bad))[0] == 2


def test_solve_rejects_affine(tmp_path, capsys):
    path = _builtin(tmp_path, capsys, "recourse-regions")
    assert _run(capsys, "solve", str(path))[0] == 2


def test_bounds_closed_forms(capsys):
    code, out, _ = _run(capsys, "bounds", "objective", "--nxi", "2")
    assert code == 0 and out.splitlines()[0] == "objective_bound: 3"
    code, out, _ = _run(capsys, "bounds", "gap", "--L", "1", "--diam", "2", "--s", "2", "--k", "4", "--json")
    assert json.loads(out)["value"] == pytest.approx(2 * math.log(2))
    code, out, _ = _run(capsys, "bounds", "alpha", "--L", "1", "--diam", "1", "--nxi", "9", "--alpha", "0", "--json")
    assert json.loads(out)["value"] == 10
    code, out, _ = _run(capsys, "bounds", "constraint-gap", "--L", "1", "--diam", "1", "--nxi", "9", "--R", "3", "--s", "10", "--json")
    assert json.loads(out)["value"] == 0
    assert _run(capsys, "bounds", "gap", "--L", "1", "--diam", "1", "--s", "5", "--k", "4")[0] == 2


def test_bounds_constraint(tmp_path, capsys):
    path = _builtin(tmp_path, capsys, "cardinality-band-affine(4)")
    code, out, _ = _run(capsys, "bounds", "constraint", str(path), "--fixed-recourse", "--obj-certain", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["formula_trace"]["omega"] == 1
    code, out, _ = _run(capsys, "bounds", "constraint", str(path), "--eta", "5", "--json")
    assert json.loads(out)["value"] == 6
    rr = _builtin(tmp_path, capsys, "recourse-regions")
    assert _run(capsys, "bounds", "constraint", str(rr), "--fixed-recourse")[0] == 2


def test_regions(tmp_path, capsys):
    path = _builtin(tmp_path, capsys, "recourse-regions")
    dump, table = tmp_path / "r.json", tmp_path / "r.csv"
    code, out, _ = _run(capsys, "regions", str(path), "-o", str(dump), "--csv", str(table))
    assert code == 0
    assert "R_empirical=3" in out and "eta_empirical=2" in out and "cover_ok=True" in out
    assert "Y_D=[[1, 1]]" in out
    assert len(json.loads(dump.read_text())["regions"]) == 3
    assert len(table.read_text().strip().splitlines()) == 4
    code, out, _ = _run(capsys, "regions", str(path), "--json")
    assert json.loads(out)["R_bound"] == 4
    assert _run(capsys, "regions", str(path), "--x", "5")[0] == 2


def test_regions_guard_exit_4(tmp_path, capsys):
    from kadapt.model import AffineInstance, UBox

    inst = AffineInstance(
        [()], YSpace.binary(1), [[]], [[[]]] * 4, [[1]], [[[0]]] * 4, [[1, 1, 1, 1]], [0], UBox([0] * 4, [1] * 4),
    )
    path = tmp_path / "big.json"
    path.write_text(dumps(inst))
    code, _, err = _run(capsys, "regions", str(path))
    assert code == 4 and "guard" in err


def test_parse_values():
    assert parse_values("20,40,...,100") == [20, 40, 60, 80, 100]
    assert parse_values("3..5") == [3, 4, 5]
    assert parse_values("7, 9") == [7, 9]
    for bad in ("", " ", "5..3", "a,b", "1,...,3"):
        with pytest.raises(UsageError):
            parse_values(bad)


def test_run_seed_common_random_numbers():
    assert run_seed(0, 3) == 3 and run_seed(2, 4) == 2004


def test_sweep_csv_deterministic(tmp_path, capsys):
    argv = ["sweep", "--var", "t", "--values", "2,4", "--n", "5", "--reps", "2", "--seed", "1"]
    out_a = tmp_path / "a.csv"
    assert main(argv + ["-o", str(out_a)]) == 0
    code, out_b, _ = _run(capsys, *argv)
    rows_a = list(csv.DictReader(out_a.open()))
    rows_b = list(csv.DictReader(io.StringIO(out_b)))
    assert len(rows_a) == 4
    drop = lambda rows: [{k: v for k, v in r.items() if k != "runtime_ms"} for r in rows]  # noqa: E731
    assert drop(rows_a) == drop(rows_b)
    assert rows_a[0]["guarantee_bound"] == f"{1 + math.log(2):.6f}"
    for r in rows_a:
        assert int(r["k_lb"]) <= int(r["k_ub"]) <= int(r["value"])


def test_sweep_over_n(capsys):
    code, out, _ = _run(capsys, "sweep", "--var", "n", "--values", "3..4", "--t", "5", "--reps", "1")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and [r["value"] for r in rows] == ["3", "4"]


def test_sweep_usage_errors(capsys):
    assert _run(capsys, "sweep", "--var", "t", "--values", "")[0] == 2
    assert _run(capsys, "sweep", "--var", "t", "--values", "0,1")[0] == 2
    assert _run(capsys, "sweep", "--var", "t", "--values", "3", "--reps", "0")[0] == 2


def test_sweep_parallel_matches_sequential():
    strip = lambda rows: [{k: v for k, v in r.items() if k != "runtime_ms"} for r in rows]  # noqa: E731
    seq = sweep_rows("t", [3, 6], 6, 0, 2, 4)
    par = sweep_rows("t", [3, 6], 6, 0, 2, 4, parallel=2)
    assert strip(seq) == strip(par)


def test_module_entry_point_help(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--help"])
    assert exc.value.code == 0
    assert "generate" in capsys.readouterr().out
