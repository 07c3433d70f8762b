import json
import random

import pytest

from conftest import make_random_instance
from ilpsat.encode import encode_model
from ilpsat.errors import InfeasibleError, LengthMismatchError, RangeError, ReconstructionError
from ilpsat.ilp import build_ilp
from ilpsat.maxsat import Assignment, Clause, WcnfInstance, evaluate
from ilpsat.oracle import branch_and_bound, brute_force
from ilpsat.presolve import FREE, Fixed, MultiAggregated, SimpleAggregated, VarMap, presolve
from ilpsat.reconstruct import (
    RECORD_VERSION,
    FailureReason,
    ReconstructionRecord,
    VerdictStatus,
    reconstruct,
    verify_lifted,
    verify_optimal,
)


def record(dispositions, literal_of, simp_num_vars, cost_offset=0):
    var_map = VarMap(list(dispositions))
    var_map.reindex()
    return ReconstructionRecord(
        var_map=var_map,
        literal_of=dict(literal_of),
        origin_num_vars=len(dispositions),
        simp_num_vars=simp_num_vars,
        cost_offset=cost_offset,
        decision_origin={i: i + 1 for i in range(len(dispositions))},
    )


def test_reconstruct_chain():
    """Test lifting through a negated and a plain aggregation."""
    rec = record([SimpleAggregated(2, True), SimpleAggregated(2, False), FREE], {0: -1, 1: 1, 2: 1}, 1)

    assert reconstruct(Assignment((True,)), rec).values == (False, True, True)
    assert reconstruct(Assignment((False,)), rec).values == (True, False, False)


def test_reconstruct_all_fixed():
    """Test that fixed values ignore the simplified solution."""
    rec = record([Fixed(1), Fixed(0), Fixed(1)], {}, 0)
    for sol in (Assignment(()), Assignment((True, False))):
        assert reconstruct(sol, rec).values == (True, False, True)


def test_reconstruct_multi_and_unmapped():
    """Test multi-aggregations and free variables without a literal."""
    rec = record([FREE, FREE, MultiAggregated(1, ((-1, 0),)), FREE], {0: 1, 1: 2}, 2)
    assert reconstruct(Assignment((True, False)), rec).values == (True, False, False, False)
    assert reconstruct(Assignment((False, True)), rec).values == (False, True, True, False)


def test_reconstruct_errors():
    """Test short assignments and out-of-range multi-aggregations."""
    rec = record([FREE, FREE, MultiAggregated(0, ((1, 0), (1, 1)))], {0: 1, 1: 2}, 2)
    with pytest.raises(LengthMismatchError):
        reconstruct(Assignment((True,)), rec)
    with pytest.raises(RangeError):
        reconstruct(Assignment((True, True)), rec)


def test_verify_lifted_out_of_range():
    """Test that a simplified solution breaking an aggregation range fails verification."""
    origin = WcnfInstance(num_vars=3, soft=[(Clause.of([3]), 1)])
    rec = record([FREE, FREE, MultiAggregated(0, ((1, 0), (1, 1)))], {0: 1, 1: 2}, 2)
    test_cases = [
        {"description": "both summands set", "values": (True, True), "passed": False, "lifted": None},
        {"description": "one summand set", "values": (True, False), "passed": True, "lifted": (True, False, True)},
    ]
    for case in test_cases:
        lifted, verdict = verify_lifted(origin, Assignment(case["values"]), rec, 0)
        assert verdict.passed is case["passed"], case["description"]
        if case["lifted"] is None:
            assert lifted is None
            assert verdict.reasons == (FailureReason.OUT_OF_RANGE,)
            assert verdict.summary().startswith("FAIL(OutOfRange")
        else:
            assert lifted.values == case["lifted"]


def test_record_json(tmp_path):
    """Test the sidecar file survives a save and load."""
    rec = record([SimpleAggregated(2, True), Fixed(1), FREE, MultiAggregated(1, ((-1, 2),))], {0: -1, 2: 1, 3: 2}, 2, 7)
    path = tmp_path / "map.json"
    rec.save(path)

    data = json.loads(path.read_text())
    assert data["version"] == RECORD_VERSION
    assert data["costOffset"] == 7

    loaded = ReconstructionRecord.load(path)
    assert loaded.var_map.dispositions == rec.var_map.dispositions
    assert loaded.literal_of == rec.literal_of
    assert loaded.decision_origin == rec.decision_origin
    assert loaded.fixed_values == {1: 1}
    assert (loaded.origin_num_vars, loaded.simp_num_vars, loaded.cost_offset) == (4, 2, 7)


def test_record_rejects_bad_documents(tmp_path):
    """Test version and shape checks on load."""
    test_cases = [
        {"description": "not JSON", "text": "{"},
        {"description": "wrong version", "text": json.dumps({"version": 99})},
        {"description": "missing keys", "text": json.dumps({"version": RECORD_VERSION})},
        {
            "description": "unknown disposition",
            "text": json.dumps({
                "version": RECORD_VERSION,
                "dispositions": [{"type": "twisted"}],
                "literals": {},
                "originNumVars": 1,
                "simpNumVars": 0,
                "costOffset": 0,
                "decisionOrigin": {},
            }),
        },
    ]

    for case in test_cases:
        path = tmp_path / "map.json"
        path.write_text(case["text"])
        with pytest.raises(ReconstructionError):
            ReconstructionRecord.load(path)


def test_verify_optimal(small_instance):
    """Test verdicts on the small instance."""
    test_cases = [
        {"description": "optimal", "values": (False, True), "claimed": 2, "status": VerdictStatus.PASS, "reasons": ()},
        {
            "description": "hard violation",
            "values": (False, False),
            "claimed": 0,
            "status": VerdictStatus.FAIL,
            "reasons": (FailureReason.HARD_VIOLATION,),
        },
        {
            "description": "off-by-one claim",
            "values": (False, True),
            "claimed": 3,
            "status": VerdictStatus.FAIL,
            "reasons": (FailureReason.COST_MISMATCH,),
        },
        {
            "description": "feasible but not optimal",
            "values": (True, False),
            "claimed": 3,
            "status": VerdictStatus.FAIL,
            "reasons": (FailureReason.NOT_OPTIMAL,),
        },
    ]

    for case in test_cases:
        verdict = verify_optimal(small_instance, Assignment(case["values"]), case["claimed"])
        assert verdict.status is case["status"], case["description"]
        assert verdict.reasons == case["reasons"], case["description"]


def test_verify_without_oracle(small_instance):
    """Test that a negative limit skips the optimality check."""
    verdict = verify_optimal(small_instance, Assignment((True, False)), 3, oracle_var_limit=-1)
    assert verdict.passed
    assert not verdict.oracle_checked
    assert verdict.summary() == "PASS (cost 3)"


def test_verdict_summary(small_instance):
    """Test the human-readable verdict."""
    verdict = verify_optimal(small_instance, Assignment((False, False)), 0)
    assert verdict.summary() == "FAIL(HardViolation on hard clauses [0])"
    assert verdict.to_dict()["status"] == "FAIL"
    assert verify_optimal(small_instance, Assignment((False, True)), 2).summary() == "PASS (cost 2, oracle-optimal)"


def test_lift_optimal_random():
    """Test that optimal simplified solutions lift to optimal original ones."""
    rng = random.Random(41)
    for _ in range(150):
        origin = make_random_instance(rng, max_vars=10, max_clauses=25)
        try:
            simp = presolve(build_ilp(origin))
        except InfeasibleError:
            assert brute_force(origin).is_unsat
            continue
        encoded = encode_model(simp)
        rec = ReconstructionRecord.from_encoding(simp, encoded, origin.num_vars)
        best = branch_and_bound(encoded.instance)
        expected = brute_force(origin)
        if best.is_unsat:
            assert expected.is_unsat
            continue
        lifted = reconstruct(best.witness, rec)
        assert evaluate(origin, lifted) == best.cost == expected.cost
        assert verify_optimal(origin, lifted, best.cost).passed


def test_empty_hard_instance_verdict():
    """Test verification of an instance with only soft clauses."""
    instance = WcnfInstance(num_vars=1, soft=[(Clause.of([1]), 2)], cost_offset=4)
    verdict = verify_optimal(instance, Assignment((True,)), 4)
    assert verdict.passed
    assert verdict.oracle_cost == 4
