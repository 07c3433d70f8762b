import itertools
import random

import pytest
from pysat.solvers import Solver

from ilpsat.encode import (
    AmoMethod,
    PbMethod,
    encode_amo,
    encode_and,
    encode_at_most,
    encode_or,
    encode_partitioning,
    encode_pb,
    normalize_pb,
    sequential_counter,
)
from ilpsat.errors import EmptyConstraintError, TriviallyFalseError


def fresh_after(n):
    """Fresh-variable source starting right after the input variables."""
    return itertools.count(n + 1).__next__


def projected_models(clauses, n):
    """Input points (over variables 1..n) that extend to a model of ``clauses``."""
    points = set()
    with Solver(bootstrap_with=clauses) as solver:
        # declare every input variable, even those no clause mentions
        for v in range(1, n + 1):
            solver.add_clause([v, -v])
        for point in itertools.product((0, 1), repeat=n):
            assumptions = [v + 1 if bit else -(v + 1) for v, bit in enumerate(point)]
            if solver.solve(assumptions=assumptions):
                points.add(point)
    return points


def points_where(n, predicate):
    return {p for p in itertools.product((0, 1), repeat=n) if predicate(p)}


def test_encode_or():
    """Test the disjunction encoding."""
    assert encode_or([1, -2]) == [[1, -2]]
    assert encode_or([1]) == [[1]]
    with pytest.raises(EmptyConstraintError):
        encode_or([])


def test_encode_and():
    """Test the product encoding clauses and semantics."""
    assert encode_and(3, [1, 2]) == [[3, -1, -2], [-3, 1], [-3, 2]]
    assert encode_and(2, [1]) == [[2, -1], [-2, 1]]

    # y = x1 * x2 * x3 with y as variable 4
    models = projected_models(encode_and(4, [1, 2, 3]), 4)
    assert models == points_where(4, lambda p: p[3] == (p[0] & p[1] & p[2]))

    with pytest.raises(EmptyConstraintError):
        encode_and(1, [])


def test_encode_amo():
    """Test the at-most-one encodings."""
    assert encode_amo([1, 2, 3], AmoMethod.PAIRWISE, fresh_after(3)) == [[-1, -2], [-1, -3], [-2, -3]]
    assert encode_amo([1, 2, 3], AmoMethod.SEQUENTIAL, fresh_after(3)) == [
        [-1, 4], [-4, 5], [-2, 5], [-2, -4], [-3, -5],
    ]
    assert encode_amo([1], AmoMethod.SEQUENTIAL, fresh_after(1)) == []


@pytest.mark.parametrize("method", list(AmoMethod))
@pytest.mark.parametrize("n", range(1, 9))
def test_amo_projection(method, n):
    """Test that projected models are exactly the points with at most one true literal."""
    literals = [v if v % 2 else -v for v in range(1, n + 1)]
    models = projected_models(encode_amo(literals, method, fresh_after(n)), n)

    def true_count(p):
        return sum(bit == (lit > 0) for bit, lit in zip(p, literals))

    assert models == points_where(n, lambda p: true_count(p) <= 1)


def test_encode_partitioning():
    """Test the exactly-one encoding."""
    assert encode_partitioning([1, 2], AmoMethod.PAIRWISE, fresh_after(2)) == [[-1, -2], [1, 2]]
    assert encode_partitioning([1], AmoMethod.PAIRWISE, fresh_after(1)) == [[1]]
    for method in AmoMethod:
        models = projected_models(encode_partitioning([1, 2, 3, 4], method, fresh_after(4)), 4)
        assert models == points_where(4, lambda p: sum(p) == 1)


def test_amo_method_for_size():
    """Test the pairwise/sequential switch."""
    assert AmoMethod.for_size(6) is AmoMethod.PAIRWISE
    assert AmoMethod.for_size(7) is AmoMethod.SEQUENTIAL
    assert AmoMethod.for_size(3, pairwise_max=2) is AmoMethod.SEQUENTIAL


@pytest.mark.parametrize("n", range(1, 7))
def test_sequential_counter(n):
    """Test at-most-k for every k."""
    literals = list(range(1, n + 1))
    for k in range(0, n + 1):
        models = projected_models(sequential_counter(literals, k, fresh_after(n)), n)
        assert models == points_where(n, lambda p: sum(p) <= k), f"k={k}"


def test_normalize_pb():
    """Test sign normalization of PB terms."""
    weighted, constant = normalize_pb([(2, -1), (-3, 2), (1, 3), (-1, 3)])
    assert weighted == [(3, -2), (2, -1)]
    assert constant == -3


def test_pb_examples():
    """Test small PB constraints."""
    models = projected_models(encode_pb([(2, 1), (1, 2), (1, 3)], None, 2, fresh_after(3)), 3)
    assert models == points_where(3, lambda p: 2 * p[0] + p[1] + p[2] <= 2)
    assert len(models) == 7

    assert sorted(encode_pb([(1, 1), (1, 2), (1, 3)], 3, None, fresh_after(3))) == [[1], [2], [3]]

    pb = projected_models(encode_pb([(1, 1), (1, 2)], 1, 1, fresh_after(2)), 2)
    partition = projected_models(encode_partitioning([1, 2], AmoMethod.PAIRWISE, fresh_after(2)), 2)
    assert pb == partition


def test_pb_trivially_false():
    """Test bounds no 0-1 point can meet."""
    with pytest.raises(TriviallyFalseError):
        encode_pb([(1, 1), (1, 2)], 3, None, fresh_after(2))
    with pytest.raises(TriviallyFalseError):
        encode_pb([(1, 1), (-1, 2)], None, -2, fresh_after(2))
    with pytest.raises(ValueError):
        encode_pb([(1, 1)], None, None, fresh_after(1))


def test_bdd_limit_falls_back_to_adder():
    """Test that an oversized BDD is replaced by the adder network."""
    weighted = [(7, 1), (5, 2), (3, 3), (2, 4)]
    clauses, method = encode_at_most(weighted, 9, fresh_after(4), bdd_node_limit=1)
    assert method is PbMethod.ADDER
    assert projected_models(clauses, 4) == points_where(4, lambda p: 7 * p[0] + 5 * p[1] + 3 * p[2] + 2 * p[3] <= 9)

    _, method = encode_at_most(weighted, 9, fresh_after(4))
    assert method is PbMethod.BDD
    _, method = encode_at_most([(2, 1), (2, 2), (2, 3)], 3, fresh_after(3))
    assert method is PbMethod.CARDINALITY


def random_pb(rng, n):
    terms = []
    for v in rng.sample(range(1, n + 1), rng.randint(1, n)):
        coef = rng.choice([c for c in range(-7, 8) if c != 0])
        terms.append((coef, v if rng.random() < 0.5 else -v))
    low = sum(min(c, 0) for c, _ in terms)
    high = sum(max(c, 0) for c, _ in terms)
    lhs = rng.randint(low - 1, high + 1) if rng.random() < 0.6 else None
    rhs = rng.randint(low - 1, high + 1) if lhs is None or rng.random() < 0.4 else None
    if lhs is not None and rhs is not None and lhs > rhs:
        lhs, rhs = rhs, lhs
    return terms, lhs, rhs


def pb_holds(point, terms, lhs, rhs):
    act = sum(c * (point[abs(l) - 1] if l > 0 else 1 - point[abs(l) - 1]) for c, l in terms)
    return (lhs is None or act >= lhs) and (rhs is None or act <= rhs)


@pytest.mark.parametrize("method", [None, PbMethod.BDD, PbMethod.ADDER])
def test_pb_projection_random(method):
    """Test every PB method against enumeration on random constraints."""
    rng = random.Random(17)
    for _ in range(150):
        n = rng.randint(1, 8)
        terms, lhs, rhs = random_pb(rng, n)
        expected = points_where(n, lambda p: pb_holds(p, terms, lhs, rhs))
        try:
            clauses = encode_pb(terms, lhs, rhs, fresh_after(n), method=method)
        except TriviallyFalseError:
            assert not expected
            continue
        assert projected_models(clauses, n) == expected, (terms, lhs, rhs)


def test_pb_cardinality_projection():
    """Test the forced cardinality method on equal weights."""
    rng = random.Random(23)
    for _ in range(60):
        n = rng.randint(1, 8)
        w = rng.randint(1, 7)
        weighted = [(w, v if rng.random() < 0.5 else -v) for v in range(1, n + 1)]
        k = rng.randint(0, w * n)
        clauses, _ = encode_at_most(weighted, k, fresh_after(n), method=PbMethod.CARDINALITY)
        terms = [(c, l) for c, l in weighted]
        assert projected_models(clauses, n) == points_where(n, lambda p: pb_holds(p, terms, None, k))
