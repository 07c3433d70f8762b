import json
import sys

import pytest

from ilpsat.cli import EXIT_ERROR, EXIT_OK, EXIT_SATISFIABLE, EXIT_UNSAT, EXIT_VERIFICATION, main
from ilpsat.maxsat import Assignment, Clause, WcnfInstance, read_wcnf, save_wcnf
from ilpsat.oracle import branch_and_bound
from ilpsat.presolve import FREE, MultiAggregated, VarMap
from ilpsat.reconstruct import ReconstructionRecord


@pytest.fixture
def small_file(tmp_path, small_instance):
    path = tmp_path / "small.wcnf"
    save_wcnf(small_instance, path)
    return path


@pytest.fixture
def unsat_file(tmp_path):
    path = tmp_path / "unsat.wcnf"
    save_wcnf(WcnfInstance(num_vars=1, hard=[Clause.of([1]), Clause.of([-1])]), path)
    return path


def answering(tmp_path, *lines):
    """Command template of a stub solver printing `lines`."""
    script = tmp_path / "answer.py"
    body = "\n".join(f"print({line!r})" for line in lines)
    script.write_text(body + "\n")
    return f'"{sys.executable}" "{script}" {{input}}'


def test_preprocess_command(tmp_path, small_file, capsys):
    """Test the preprocess subcommand and its files."""
    out, rec = tmp_path / "simp.wcnf", tmp_path / "map.json"
    code = main(["preprocess", str(small_file), "--out", str(out), "--map", str(rec), "--no-timings"])

    assert code == EXIT_OK
    stats = json.loads(capsys.readouterr().out)
    assert stats["originVars"] == 2
    assert stats["gateDecision"] in ("UsedSimplified", "UsedOriginal")
    assert "preprocessingTimeSeconds" not in stats
    assert read_wcnf(out).num_vars == stats["simpVars"]
    assert json.loads(rec.read_text())["originNumVars"] == 2


def test_preprocess_infeasible(unsat_file, capsys):
    """Test that infeasibility found by presolve exits with 20."""
    assert main(["preprocess", str(unsat_file)]) == EXIT_UNSAT
    assert json.loads(capsys.readouterr().out)["status"] == "UNSATISFIABLE"


def test_solve_command(small_file, capsys):
    """Test solving with each in-process solver."""
    for solver in ("builtin", "rc2"):
        assert main(["solve", str(small_file), "--solver", solver]) == EXIT_OK
        assert capsys.readouterr().out == "s OPTIMUM FOUND\no 2\nv 01\n"


def test_solve_unsat(unsat_file, capsys):
    """Test the unsatisfiable answer."""
    assert main(["solve", str(unsat_file)]) == EXIT_UNSAT
    assert capsys.readouterr().out == "s UNSATISFIABLE\n"


def test_solve_external_satisfiable(tmp_path, small_file, capsys):
    """Test that an unproven answer exits with 10."""
    command = answering(tmp_path, "s SATISFIABLE", "o 3", "v 10")
    code = main(["solve", str(small_file), "--gate", "never", "--solver-cmd", command, "--time-limit", "30"])

    assert code == EXIT_SATISFIABLE
    assert capsys.readouterr().out == "s SATISFIABLE\no 3\nv 10\n"


def test_solve_external_wrong_cost(tmp_path, small_file):
    """Test that a lying solver is caught by verification."""
    command = answering(tmp_path, "s OPTIMUM FOUND", "o 0", "v 01")
    assert main(["solve", str(small_file), "--gate", "never", "--solver-cmd", command]) == EXIT_VERIFICATION


def test_verify_command(tmp_path, small_file, capsys):
    """Test verification of original-instance solutions."""
    test_cases = [
        {"description": "optimal", "text": "s OPTIMUM FOUND\no 2\nv 01\n", "expected": EXIT_OK},
        {"description": "claimed optimal but is not", "text": "s OPTIMUM FOUND\no 3\nv 10\n", "expected": EXIT_VERIFICATION},
        {"description": "satisfiable only", "text": "s SATISFIABLE\no 3\nv 10\n", "expected": EXIT_OK},
        {"description": "violates the hard clause", "text": "s SATISFIABLE\no 0\nv 00\n", "expected": EXIT_VERIFICATION},
        {"description": "unsatisfiable claim", "text": "s UNSATISFIABLE\n", "expected": EXIT_UNSAT},
        {"description": "no answer", "text": "s UNKNOWN\n", "expected": EXIT_ERROR},
        {"description": "no value line", "text": "s OPTIMUM FOUND\no 2\n", "expected": EXIT_ERROR},
    ]
    solution = tmp_path / "sol.txt"
    for case in test_cases:
        solution.write_text(case["text"])
        code = main(["verify", str(small_file), "--solution", str(solution)])
        assert code == case["expected"], case["description"]
    capsys.readouterr()


def test_verify_simplified_solution(tmp_path, small_file, capsys):
    """Test verifying a solution of the simplified instance through the sidecar."""
    out, rec = tmp_path / "simp.wcnf", tmp_path / "map.json"
    assert main(["preprocess", str(small_file), "--out", str(out), "--map", str(rec)]) == EXIT_OK

    simp = read_wcnf(out)
    best = branch_and_bound(simp)
    witness = Assignment(best.witness.values)
    solution = tmp_path / "sol.txt"
    # the o line carries the soft cost only, as external solvers report it
    solution.write_text(f"s OPTIMUM FOUND\no {best.cost - simp.cost_offset}\nv {witness.to_binary_string()}\n")
    capsys.readouterr()

    assert main(["verify", str(small_file), "--solution", str(solution), "--map", str(rec)]) == EXIT_OK
    verdict = json.loads(capsys.readouterr().out)
    assert verdict["status"] == "PASS"
    assert verdict["cost"] == 2


def test_stats_command(tmp_path, small_file, capsys):
    """Test the batch table and the JSON lines output."""
    save_wcnf(WcnfInstance(num_vars=3, hard=[Clause.of([1, 2, 3])], soft=[(Clause.of([-1]), 1)]), tmp_path / "two.wcnf")
    lines_out = tmp_path / "rows.jsonl"

    code = main(["stats", str(tmp_path), "--json", str(lines_out), "--no-timings", "--workers", "2"])

    assert code == EXIT_OK
    rows = [json.loads(line) for line in lines_out.read_text().splitlines()]
    assert sorted(r["instance"] for r in rows) == ["small.wcnf", "two.wcnf"]
    table = capsys.readouterr().out
    assert "All" in table
    assert "deltaVarsPct" in table


def test_stats_empty_directory(tmp_path):
    """Test a directory without instances."""
    assert main(["stats", str(tmp_path)]) == EXIT_ERROR


def test_missing_input(tmp_path):
    """Test that unreadable input exits with 1."""
    assert main(["solve", str(tmp_path / "missing.wcnf")]) == EXIT_ERROR


def test_solve_gate_names(small_file, capsys):
    """Test that the gate option takes the canonical name and its alias."""
    for gate in ("paper", "smaller", "always", "never"):
        assert main(["solve", str(small_file), "--gate", gate]) == EXIT_OK, gate
        assert capsys.readouterr().out == "s OPTIMUM FOUND\no 2\nv 01\n"


def test_solve_weight_overflow(tmp_path):
    """Test that soft weights summing past the WCNF range exit with 1."""
    path = tmp_path / "heavy.wcnf"
    save_wcnf(
        WcnfInstance(num_vars=1, soft=[(Clause.of([1]), 2 ** 62), (Clause.of([1]), 2 ** 62), (Clause.of([-1]), 1)]),
        path,
    )
    assert main(["solve", str(path)]) == EXIT_ERROR


def test_verify_aggregation_out_of_range(tmp_path, capsys):
    """Test that a simplified solution leaving an aggregation range fails verification."""
    source = tmp_path / "three.wcnf"
    save_wcnf(WcnfInstance(num_vars=3, soft=[(Clause.of([3]), 1)]), source)
    var_map = VarMap([FREE, FREE, MultiAggregated(0, ((1, 0), (1, 1)))])
    var_map.reindex()
    rec = tmp_path / "map.json"
    ReconstructionRecord(
        var_map=var_map,
        literal_of={0: 1, 1: 2},
        origin_num_vars=3,
        simp_num_vars=2,
        cost_offset=0,
        decision_origin={0: 1, 1: 2, 2: 3},
    ).save(rec)
    test_cases = [
        {"description": "aggregated variable evaluates to 2", "values": "11", "expected": EXIT_VERIFICATION, "status": "FAIL"},
        {"description": "aggregated variable in range", "values": "10", "expected": EXIT_OK, "status": "PASS"},
    ]
    solution = tmp_path / "sol.txt"
    for case in test_cases:
        solution.write_text(f"s SATISFIABLE\no 0\nv {case['values']}\n")
        code = main(["verify", str(source), "--solution", str(solution), "--map", str(rec)])
        assert code == case["expected"], case["description"]
        assert json.loads(capsys.readouterr().out)["status"] == case["status"]
