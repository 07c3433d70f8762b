import sys
import textwrap

import pytest

from ilpsat.errors import SolverFailureError, SolverTimeoutError
from ilpsat.maxsat import Clause, SolverStatus, WcnfInstance
from ilpsat.pipeline import SolverKind, SolverSpec, invoke_external_solver, solve_instance


def stub_solver(tmp_path, body, name="solver.py"):
    """Write a python script acting as a MaxSAT solver and return its command template."""
    script = tmp_path / name
    script.write_text(textwrap.dedent(body))
    return f'"{sys.executable}" "{script}" {{input}}'


PRINTS_OPTIMUM = """
    import sys
    open(sys.argv[1]).read()
    print("c stub solver")
    print("s OPTIMUM FOUND")
    print("o 2")
    print("v 01")
"""


def test_external_stdout_verbatim(tmp_path, small_instance):
    """Test that solver output is returned untouched."""
    command = stub_solver(tmp_path, PRINTS_OPTIMUM)
    wcnf = tmp_path / "in.wcnf"
    wcnf.write_text("p wcnf 1 0 1\n")

    assert invoke_external_solver(command, wcnf) == "c stub solver\ns OPTIMUM FOUND\no 2\nv 01\n"


def test_external_solve(tmp_path, small_instance):
    """Test parsing an external answer into a solver output."""
    spec = SolverSpec.external(stub_solver(tmp_path, PRINTS_OPTIMUM), time_limit=30)
    output = solve_instance(small_instance, spec)

    assert output.status is SolverStatus.OPTIMUM
    assert output.cost == 2
    assert output.assignment.values == (False, True)


def test_external_cost_offset(tmp_path):
    """Test that the instance offset is added to the reported soft cost."""
    instance = WcnfInstance(num_vars=2, soft=[(Clause.of([1]), 2)], cost_offset=4)
    output = solve_instance(instance, SolverSpec.external(stub_solver(tmp_path, PRINTS_OPTIMUM)))
    assert output.cost == 6
    assert output.assignment.cost == 6


def test_external_timeout(tmp_path):
    """Test the wall-clock limit."""
    command = stub_solver(tmp_path, """
        import time
        time.sleep(30)
    """)
    with pytest.raises(SolverTimeoutError):
        invoke_external_solver(command, tmp_path / "in.wcnf", time_limit=0.5)


def test_external_failure(tmp_path, small_instance):
    """Test crashes and garbage output."""
    crashing = stub_solver(tmp_path, """
        import sys
        sys.stderr.write("boom\\n")
        sys.exit(3)
    """, name="crash.py")
    with pytest.raises(SolverFailureError, match="boom"):
        invoke_external_solver(crashing, tmp_path / "in.wcnf")

    garbage = stub_solver(tmp_path, """
        print("s OPTIMUM FOUND")
        print("o 1")
        print("v x1 x2")
    """, name="garbage.py")
    with pytest.raises(SolverFailureError):
        solve_instance(small_instance, SolverSpec.external(garbage))

    with pytest.raises(SolverFailureError):
        invoke_external_solver("/nonexistent/solver {input}", tmp_path / "in.wcnf")


def test_command_template_checks(tmp_path):
    """Test placeholder validation."""
    with pytest.raises(ValueError):
        invoke_external_solver("solver --no-input", tmp_path / "in.wcnf")
    with pytest.raises(ValueError):
        invoke_external_solver("solver -t {timeout} {input}", tmp_path / "in.wcnf")
    with pytest.raises(ValueError):
        SolverSpec(kind=SolverKind.EXTERNAL, command=None)


def test_timeout_placeholder(tmp_path):
    """Test that {timeout} becomes whole seconds."""
    command = stub_solver(tmp_path, """
        import sys
        print("c", sys.argv[1])
        print("s UNKNOWN")
    """)
    command = command.replace("{input}", "{timeout} {input}")
    text = invoke_external_solver(command, tmp_path / "in.wcnf", time_limit=1.2)
    assert text.splitlines()[0] == "c 2"


@pytest.mark.parametrize("kind", [SolverKind.BUILTIN, SolverKind.RC2])
def test_in_process_solvers(kind, small_instance):
    """Test the builtin search and RC2 on the small instance."""
    output = solve_instance(small_instance, SolverSpec(kind=kind))
    assert output.status is SolverStatus.OPTIMUM
    assert output.cost == 2
    assert output.assignment.values == (False, True)


def test_rc2_empty_soft_and_offset():
    """Test that RC2 costs include empty soft clauses and the offset."""
    instance = WcnfInstance(num_vars=1, soft=[(Clause(()), 3), (Clause.of([1]), 1)], cost_offset=2)
    output = solve_instance(instance, SolverSpec(kind=SolverKind.RC2))
    assert output.cost == 5


@pytest.mark.parametrize("kind", [SolverKind.BUILTIN, SolverKind.RC2])
def test_in_process_unsat(kind):
    """Test unsatisfiable hard clauses."""
    instance = WcnfInstance(num_vars=1, hard=[Clause.of([1]), Clause.of([-1])])
    assert solve_instance(instance, SolverSpec(kind=kind)).is_unsat
    assert solve_instance(WcnfInstance(num_vars=1, hard=[Clause(())]), SolverSpec(kind=kind)).is_unsat
