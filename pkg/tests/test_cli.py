import csv
import json
import math
from pathlib import Path

import pytest

import evrpsolve as ev
from evrpsolve.cli import main

SOLVE_FAST = [
    "--population", "16", "--elites", "3", "--max-generations", "6",
]


@pytest.fixture
def tiny_path(data_dir):
    return str(data_dir / "tiny-two-customers.evrp")


def test_solve_writes_solution_and_report(tiny_path, tmp_path, capsys):
    out = tmp_path / "tiny.sol"
    report = tmp_path / "tiny.json"
    code = main(
        ["solve", tiny_path, "--seed", "1", "--out", str(out), "--report", str(report)]
        + SOLVE_FAST
    )
    assert code == 0
    payload = json.loads(report.read_text())
    assert payload["cost"] == pytest.approx(4.0)
    assert payload["seed"] == 1
    assert payload["evaluations"] > 0
    assert payload["feasible"] is True
    lines = out.read_text().strip().splitlines()
    assert lines[-1].startswith("COST ")


def test_solve_json_format(tiny_path, tmp_path):
    out = tmp_path / "tiny.sol.json"
    code = main(
        ["solve", tiny_path, "--format", "json", "--out", str(out), "--report",
         str(tmp_path / "r.json")] + SOLVE_FAST
    )
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["objective"] == pytest.approx(4.0)
    assert payload["routes"]


def test_solve_max_generations_zero(tiny_path, tmp_path):
    report = tmp_path / "r.json"
    code = main(
        ["solve", tiny_path, "--max-generations", "0", "--population", "8",
         "--elites", "2", "--out", str(tmp_path / "s.sol"), "--report", str(report)]
    )
    assert code == 0
    assert json.loads(report.read_text())["generations"] == 0


def test_solve_missing_file_exit_code(capsys):
    assert main(["solve", "no-such-file.evrp"]) == 1
    assert "error" in capsys.readouterr().err


def test_solve_oracle_mode(tiny_path, tmp_path):
    report = tmp_path / "r.json"
    code = main(
        ["solve", tiny_path, "--oracle", "--out", str(tmp_path / "s.sol"),
         "--report", str(report)] + SOLVE_FAST
    )
    assert code == 0
    payload = json.loads(report.read_text())
    assert payload["oracle_cost"] == pytest.approx(4.0)
    assert payload["oracle_gap"] == pytest.approx(0.0, abs=1e-9)


def test_solve_infeasible_instance_exit_2(tmp_path):
    bad = tmp_path / "bad.evrp"
    inst = ev.build_instance(
        "bad", (0, 0), [(100, 0, 1)], capacity=5, battery_capacity=10
    )
    bad.write_text(ev.dump_instance(inst))
    code = main(["solve", str(bad), "--population", "6", "--elites", "1",
                 "--max-generations", "1"])
    assert code == 2


def test_validate_roundtrip(tiny_path, tmp_path):
    sol = tmp_path / "tiny.sol"
    main(["solve", tiny_path, "--out", str(sol), "--report",
          str(tmp_path / "r.json")] + SOLVE_FAST)
    assert main(["validate", tiny_path, str(sol)]) == 0


def test_validate_skipped_customer(tiny_path, tmp_path, capsys):
    sol = tmp_path / "partial.sol"
    sol.write_text("1 2 1\n")
    code = main(["validate", tiny_path, str(sol)])
    assert code == 3
    assert "CustomerOnce" in capsys.readouterr().out


def test_validate_battery_violation(tmp_path, capsys):
    inst = ev.build_instance(
        "b", (0, 0), [(6, 0, 1)], capacity=5, battery_capacity=10
    )
    ipath = tmp_path / "b.evrp"
    ipath.write_text(ev.dump_instance(inst))
    sol = tmp_path / "b.sol"
    sol.write_text("1 2 1\nCOST 12.0\n")
    code = main(["validate", str(ipath), str(sol)])
    out = capsys.readouterr().out
    assert code == 3
    assert "Battery" in out and "leg 1" in out


def test_validate_unreadable_solution(tiny_path):
    assert main(["validate", tiny_path, "missing.sol"]) == 1


def test_bench_csv_roundtrip(tiny_path, tmp_path):
    out = tmp_path / "bench.csv"
    code = main(
        ["bench", tiny_path, "--runs", "2", "--seed-base", "7", "--out", str(out)]
        + SOLVE_FAST
    )
    assert code == 0
    rows = list(csv.DictReader(out.read_text().splitlines()))
    assert len(rows) == 1
    row = rows[0]
    assert row["name"] == "tiny-two-customers"
    assert row["runs"] == "2"
    assert float(row["min"]) == pytest.approx(4.0)
    assert float(row["std"]) == pytest.approx(0.0)
    assert float(row["avg_evals"]) > 0


def test_bench_csv_header_exact(tiny_path, tmp_path):
    out = tmp_path / "bench.csv"
    main(["bench", tiny_path, "--runs", "1", "--out", str(out)] + SOLVE_FAST)
    assert out.read_text().splitlines()[0] == "name,min,mean,std,runs,avg_evals,avg_seconds"


def test_bench_single_run_std_zero(tiny_path, tmp_path):
    out = tmp_path / "bench.csv"
    main(["bench", tiny_path, "--runs", "1", "--out", str(out)] + SOLVE_FAST)
    row = next(csv.DictReader(out.read_text().splitlines()))
    assert row["std"] == "0.00"


def test_bench_isolates_malformed_file(tiny_path, tmp_path, capsys):
    broken_dir = tmp_path / "instances"
    broken_dir.mkdir()
    (broken_dir / "a-broken.evrp").write_text("NAME: nope\nEOF\n")
    good = Path(tiny_path).read_text()
    (broken_dir / "b-good.evrp").write_text(good)
    out = tmp_path / "bench.csv"
    code = main(["bench", str(broken_dir), "--runs", "1", "--out", str(out)] + SOLVE_FAST)
    assert code == 0
    rows = list(csv.DictReader(out.read_text().splitlines()))
    assert len(rows) == 2
    assert rows[0]["min"] == "ERROR"
    assert rows[1]["name"] == "tiny-two-customers"
    assert float(rows[1]["min"]) == pytest.approx(4.0)


def test_bench_json_output(tiny_path, tmp_path):
    jpath = tmp_path / "bench.json"
    main(["bench", tiny_path, "--runs", "1", "--out", str(tmp_path / "b.csv"),
          "--json", str(jpath)] + SOLVE_FAST)
    rows = json.loads(jpath.read_text())
    assert rows[0]["name"] == "tiny-two-customers"
