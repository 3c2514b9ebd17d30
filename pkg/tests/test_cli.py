"""Command-line behaviour: exit codes, file outputs, and the CSV schema."""

from __future__ import annotations

import csv
import json

from tqaplan.cli import CSV_COLUMNS, main


def run(argv):
    return main([str(a) for a in argv])


def test_gen_solve_validate_cycle(tmp_path, capsys):
    domain = tmp_path / "g.json"
    assert run(["gen", "--type", "I", "--copies", "1", "--out", domain]) == 0
    plan = tmp_path / "g.plan.json"
    assert run(["solve", domain, "--max-copies", "1", "--plan-out", plan]) == 0
    record = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert record["verdict"] == "found" and record["n_found"] == 4
    assert plan.exists()
    assert run(["validate", domain, plan]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["verdict"] == "valid"


def test_solve_exit_codes(tmp_path):
    no_raiser = tmp_path / "d.json"
    no_raiser.write_text(
        '{"fluents": ["g"], "skills": [{"name": "a", "kind": "delay", "duration": 2}],'
        ' "goal": ["g"]}'
    )
    assert run(["solve", no_raiser, "--max-n", "3"]) == 1
    assert run(["solve", tmp_path / "missing.json"]) == 3
    bad = tmp_path / "bad.json"
    bad.write_text('{"fluents": [], "wat": 1}')
    assert run(["solve", bad]) == 3
    assert run(["solve", bad, "--no-strict-io", "--max-n", "1"]) == 0  # empty goal


def test_validate_detects_tampering(tmp_path, capsys):
    domain = tmp_path / "g.json"
    run(["gen", "--type", "I", "--copies", "1", "--out", domain])
    plan = tmp_path / "g.plan.json"
    run(["solve", domain, "--max-copies", "1", "--plan-out", plan])
    capsys.readouterr()
    doc = json.loads(plan.read_text())
    doc["actions"] = [a for a in doc["actions"] if a["name"] != "a3_g1"]
    plan.write_text(json.dumps(doc))
    assert run(["validate", domain, plan]) == 1
    report = json.loads(capsys.readouterr().out)
    assert report["verdict"] == "invalid"
    rules = {v["rule"] for v in report["violations"]}
    assert "frame" in rules
    empty = tmp_path / "empty.json"
    empty.write_text("")
    assert run(["validate", domain, empty]) == 3


def test_encode_is_deterministic(tmp_path):
    domain = tmp_path / "d.json"
    domain.write_text(
        '{"fluents": ["g"], "skills": [{"name": "a", "kind": "delay", "duration": 2,'
        ' "raises": ["g"]}], "goal": ["g"]}'
    )
    out1, out2 = tmp_path / "m1.txt", tmp_path / "m2.txt"
    assert run(["encode", domain, "--n", "2", "--out", out1]) == 0
    assert run(["encode", domain, "--n", "2", "--out", out2]) == 0
    assert out1.read_text() == out2.read_text()
    assert out1.read_text().startswith("cspmodel 1\n")


def test_bench_csv_schema(tmp_path):
    out = tmp_path / "sweep.csv"
    assert (
        run(
            ["bench", "--type", "I", "--copies", "1..3", "--max-copies", "1", "--out", out]
        )
        == 0
    )
    with out.open() as handle:
        rows = list(csv.DictReader(handle))
    assert len(rows) == 3
    assert list(rows[0].keys()) == list(CSV_COLUMNS)
    assert [r["copies"] for r in rows] == ["1", "2", "3"]
    assert all(r["verdict"] == "valid" for r in rows)
    assert all(r["n_found"] == "4" for r in rows)
    # appending keeps one header
    assert run(["bench", "--type", "I", "--copies", "1", "--max-copies", "1", "--out", out]) == 0
    with out.open() as handle:
        rows = list(csv.DictReader(handle))
    assert len(rows) == 4


def test_gen_rejects_bad_spec(capsys):
    assert run(["gen", "--type", "II", "--copies", "1"]) == 3


def test_geometric_probing_reports_non_minimality(tmp_path, capsys):
    domain = tmp_path / "d.json"
    domain.write_text(
        '{"fluents": ["g"], "skills": [{"name": "a", "kind": "delay", "duration": 2,'
        ' "raises": ["g"]}], "goal": ["g"]}'
    )
    assert run(["solve", domain, "--geometric-n", "--max-n", "4"]) == 0
    record = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert record["minimal_n_guaranteed"] is False


def test_solve_output_idempotent(tmp_path, capsys):
    domain = tmp_path / "g.json"
    run(["gen", "--type", "I", "--copies", "1", "--out", domain])
    first, second = tmp_path / "p1.json", tmp_path / "p2.json"
    assert run(["solve", domain, "--max-copies", "1", "--plan-out", first]) == 0
    assert run(["solve", domain, "--max-copies", "1", "--plan-out", second]) == 0
    assert first.read_text() == second.read_text()
