import csv
import json
from collections import defaultdict

import pytest

from walkless.cli import main

ROW_SUM_TOL = 1e-9


def write_two_node_graph(tmp_path):
    path = tmp_path / "graph.json"
    path.write_text(json.dumps({"nodes": 2, "edges": [[1, 1], [1, 2], [2, 2]]}))
    return str(path)


def read_distributions(path):
    sums = defaultdict(float)
    probs = {}
    with open(path) as fh:
        for row in csv.DictReader(fh):
            step, node = int(row["step"]), int(row["node"])
            p = float(row["probability"])
            sums[step] += p
            probs[step, node] = p
    return sums, probs


def test_run_writes_all_outputs(tmp_path, capsys):
    code = main(
        [
            "run",
            "--random-graph", "4",
            "--seed", "3",
            "--steps", "4",
            "--out", str(tmp_path),
            "--svg",
            "--trajectory",
        ]
    )
    assert code == 0
    printed = capsys.readouterr().out.splitlines()
    assert str(tmp_path / "distributions.csv") in printed
    assert str(tmp_path / "walk.svg") in printed

    sums, _ = read_distributions(tmp_path / "distributions.csv")
    assert set(sums) == set(range(5))
    for step, total in sums.items():
        assert abs(total - 1.0) <= ROW_SUM_TOL

    doc = json.loads((tmp_path / "state.json").read_text())
    assert doc["n"] == 4
    state_rows = (tmp_path / "state.csv").read_text().strip().splitlines()
    assert state_rows[0] == "j,k,re,im"
    assert len(state_rows) == 1 + 16

    traj_rows = (tmp_path / "trajectory.csv").read_text().strip().splitlines()
    assert traj_rows[0] == "step,j,k,re,im"
    assert len(traj_rows) == 1 + 5 * 16

    svg = (tmp_path / "walk.svg").read_text()
    assert svg.lstrip().startswith("<?xml")
    assert "<svg" in svg


def test_run_two_node_hadamard_is_uniform_after_two_steps(tmp_path):
    graph = write_two_node_graph(tmp_path)
    code = main(
        [
            "run",
            "--graph", graph,
            "--coin-family", "hadamard",
            "--init", "localized:1,1",
            "--steps", "2",
            "--out", str(tmp_path),
        ]
    )
    assert code == 0
    _, probs = read_distributions(tmp_path / "distributions.csv")
    assert probs[0, 1] == pytest.approx(1.0)
    assert probs[2, 1] == pytest.approx(0.5, abs=1e-12)
    assert probs[2, 2] == pytest.approx(0.5, abs=1e-12)


def test_run_is_deterministic_for_a_seed(tmp_path):
    for sub in ("a", "b"):
        (tmp_path / sub).mkdir()
        assert main(
            [
                "run",
                "--random-graph", "4",
                "--seed", "7",
                "--steps", "3",
                "--out", str(tmp_path / sub),
            ]
        ) == 0
    assert (tmp_path / "a" / "distributions.csv").read_bytes() == (
        tmp_path / "b" / "distributions.csv"
    ).read_bytes()
    assert (tmp_path / "a" / "state.json").read_bytes() == (
        tmp_path / "b" / "state.json"
    ).read_bytes()


def test_run_lattice_mode_with_spacing(tmp_path):
    code = main(
        [
            "run",
            "--random-graph", "2",
            "--seed", "1",
            "--steps", "2",
            "--mode", "lattice",
            "--spacing", "3",
            "--out", str(tmp_path),
        ]
    )
    assert code == 0
    sums, _ = read_distributions(tmp_path / "distributions.csv")
    for total in sums.values():
        assert abs(total - 1.0) <= ROW_SUM_TOL


def test_spacing_outside_lattice_mode_rejected(tmp_path, capsys):
    code = main(
        ["run", "--random-graph", "2", "--spacing", "3", "--out", str(tmp_path)]
    )
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_verify_prints_three_pass_lines(tmp_path, capsys):
    graph = write_two_node_graph(tmp_path)
    code = main(["verify", "--graph", graph, "--steps", "5"])
    assert code == 0
    out = capsys.readouterr().out
    for pair in ("explicit<->walkless", "walkless<->compiled", "compiled<->lattice"):
        assert pair in out
    assert out.count("PASS") == 3
    assert "FAIL" not in out


def test_compile_writes_programs_and_schedules(tmp_path, capsys):
    code = main(
        ["compile", "--random-graph", "4", "--seed", "5", "--out", str(tmp_path)]
    )
    assert code == 0
    programs = json.loads((tmp_path / "programs.json").read_text())
    schedules = json.loads((tmp_path / "schedules.json").read_text())
    assert len(programs) == 4 and len(schedules) == 4
    for sched in schedules:
        assert sched["n"] == 4
        assert [st["interval"] for st in sched["stages"]] == [1, 2, 1]
    out = capsys.readouterr().out
    assert "stage count matches cost model: True" in out


def test_cost_table_and_json(tmp_path, capsys):
    code = main(["cost", "--n", "8", "--steps", "2", "--out", str(tmp_path)])
    assert code == 0
    out = capsys.readouterr().out
    assert "walkless stages / step" in out
    doc = json.loads((tmp_path / "cost.json").read_text())
    assert doc["walkless_stages_per_step"] == 7
    assert doc["walkless_total"] == 14


def test_missing_graph_file_is_input_error(tmp_path, capsys):
    code = main(["run", "--graph", str(tmp_path / "nope.json"), "--out", str(tmp_path)])
    assert code == 2
    assert "nope.json" in capsys.readouterr().err


def test_graph_source_must_be_exactly_one(tmp_path, capsys):
    graph = write_two_node_graph(tmp_path)
    assert main(["run", "--out", str(tmp_path)]) == 2
    assert (
        main(
            ["run", "--graph", graph, "--random-graph", "4", "--out", str(tmp_path)]
        )
        == 2
    )


def test_cost_rejects_non_power_of_two(capsys):
    assert main(["cost", "--n", "5"]) == 2
    assert "error:" in capsys.readouterr().err


def test_malformed_graph_file(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"nodes": 2, "edges": [[1, 5]]}')
    assert main(["run", "--graph", str(bad), "--out", str(tmp_path)]) == 2
    bad.write_text("not json at all")
    assert main(["run", "--graph", str(bad), "--out", str(tmp_path)]) == 2
