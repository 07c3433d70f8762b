import itertools
import random

import pytest

from conftest import ilp_brute_force, make_random_instance
from ilpsat.errors import EmptyHardClauseError
from ilpsat.ilp import (
    ConstraintClass,
    LinConstraint,
    VarKind,
    and_row,
    build_ilp,
    classify_constraint,
    clause_literals,
    clause_row,
    product_shape,
    write_lp,
)
from ilpsat.maxsat import Clause, WcnfInstance
from ilpsat.oracle import brute_force


def test_hard_clause_row():
    """Test the normal form of a hard clause with a negative literal."""
    model = build_ilp(WcnfInstance(num_vars=2, hard=[Clause.of([1, -2])]))

    row = model.constraints[0]
    assert row.terms == ((1, 0), (-1, 1))
    assert row.lhs == 0
    assert row.rhs is None
    assert row.cclass is ConstraintClass.LOGICAL_OR


def test_soft_clause_row():
    """Test the indicator link of a negative unit soft clause."""
    model = build_ilp(WcnfInstance(num_vars=1, soft=[(Clause.of([-1]), 3)]))

    z = model.vars[1]
    assert z.kind is VarKind.INDICATOR
    assert z.origin == 0
    row = model.constraints[0]
    assert row.terms == ((1, 0), (1, 1))
    assert row.lhs is None
    assert row.rhs == 1
    assert row.cclass is ConstraintClass.SOFT_LINK
    assert model.objective.terms == ((3, 1),)
    assert model.objective.offset == 0


def test_small_instance_objective_bridge(small_instance):
    """Test soft total minus the ILP optimum equals the MaxSAT optimum."""
    model = build_ilp(small_instance)

    assert model.soft_weight_total == 5
    assert ilp_brute_force(model)[0] == 3
    assert model.soft_weight_total - ilp_brute_force(model)[0] == 2


def test_sizes():
    """Test one row per clause and one variable per WCNF variable and soft clause."""
    rng = random.Random(3)
    for _ in range(100):
        instance = make_random_instance(rng, max_vars=10, max_clauses=20)
        model = build_ilp(instance)
        assert len(model.constraints) == instance.num_clauses
        assert model.num_vars == instance.num_vars + len(instance.soft)
        assert all(v < model.num_vars for row in model.constraints for v in row.variables)


def test_objective_bridge_random():
    """Test the objective bridge against an independent MaxSAT enumeration."""
    rng = random.Random(11)
    for _ in range(60):
        instance = make_random_instance(rng, max_vars=6, max_clauses=8, hard_ratio=0.5)
        if len(instance.soft) > 6:
            instance.soft = instance.soft[:6]
        model = build_ilp(instance)
        maxsat = brute_force(instance)
        ilp = ilp_brute_force(model)[0]
        if maxsat.is_unsat:
            assert ilp is None
        else:
            assert model.soft_weight_total - ilp == maxsat.cost


def test_empty_hard_clause_rejected():
    """Test that an empty hard clause cannot be modelled."""
    with pytest.raises(EmptyHardClauseError):
        build_ilp(WcnfInstance(num_vars=1, hard=[Clause(())]))


def test_tautologies_dropped():
    """Test that tautological clauses produce no rows and no indicators."""
    instance = WcnfInstance(
        num_vars=2,
        hard=[Clause.of([1, -1]), Clause.of([2])],
        soft=[(Clause.of([2, -2]), 4)],
    )
    model = build_ilp(instance)

    assert model.dropped_tautologies == 2
    assert len(model.constraints) == 1
    assert model.num_vars == 2
    assert model.soft_weight_total == 0


def test_classify_constraint():
    """Test syntactic classification."""
    test_cases = [
        {
            "description": "packing",
            "row": LinConstraint.build([(1, 0), (1, 1), (1, 2)], rhs=1),
            "expected": ConstraintClass.SETPPC_PACKING,
        },
        {
            "description": "partitioning",
            "row": LinConstraint.build([(1, 0), (1, 1)], lhs=1, rhs=1),
            "expected": ConstraintClass.SETPPC_PARTITIONING,
        },
        {
            "description": "weighted row",
            "row": LinConstraint.build([(2, 0), (1, 1)], rhs=2),
            "expected": ConstraintClass.GENERAL_LINEAR,
        },
        {
            "description": "clause with a negated literal",
            "row": LinConstraint.build([(1, 0), (-1, 1)], lhs=0),
            "expected": ConstraintClass.LOGICAL_OR,
        },
        {
            "description": "product relation",
            "row": and_row((0, False), [(1, False), (2, False)]),
            "expected": ConstraintClass.LOGICAL_AND,
        },
    ]

    for case in test_cases:
        row = classify_constraint(case["row"])
        assert row.cclass is case["expected"], case["description"]
        assert row.terms == case["row"].terms
        assert (row.lhs, row.rhs) == (case["row"].lhs, case["row"].rhs)
        assert classify_constraint(row) == row


def test_classify_keeps_soft_links():
    """Test that soft links keep their class."""
    row = LinConstraint.build([(1, 2), (-1, 0), (-1, 1)], rhs=0, cclass=ConstraintClass.SOFT_LINK)
    assert classify_constraint(row).cclass is ConstraintClass.SOFT_LINK


def test_clause_row_and_literals():
    """Test that clause rows read back as the same literals."""
    lits = [(0, False), (1, True), (3, True)]
    row = clause_row(lits)
    assert sorted(clause_literals(row)) == sorted(lits)
    assert sorted(clause_literals(row.negated())) == sorted(lits)
    assert clause_literals(LinConstraint.build([(2, 0), (1, 1)], lhs=1)) is None


@pytest.mark.parametrize("output_negated", [False, True])
def test_and_row_semantics(output_negated):
    """Test that the product row holds exactly on the graph of the product."""
    inputs = [(1, False), (2, True), (3, False)]
    row = and_row((0, output_negated), inputs)

    for values in itertools.product((0, 1), repeat=4):
        lit = lambda var, neg: 1 - values[var] if neg else values[var]
        product = int(all(lit(v, n) for v, n in inputs))
        assert row.satisfied_by(values) == (lit(0, output_negated) == product)

    shape = product_shape(row.terms, row.lhs, row.rhs)
    assert shape == ((0, output_negated), inputs)


def test_write_lp(small_instance):
    """Test the LP text export."""
    text = write_lp(build_ilp(small_instance))

    assert "Maximize" in text
    assert " obj: 3 z0 + 2 z1" in text
    assert " c0: y1 + y2 >= 1" in text
    assert "Binary" in text
    assert text.endswith("End\n")
