"""
Presolve passes over a 0-1 ILP and the round loop that drives them.

Every pass works on a model indexed by the original variables; variables
that get a disposition simply stop occurring in rows and objective.
`presolve` re-indexes the survivors once the rounds are over.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

from ilpsat.errors import InfeasibleError
from ilpsat.ilp.bridge import IlpLit, and_row, classify_constraint, clause_literals
from ilpsat.ilp.types import (
    ConstraintClass,
    IlpModel,
    IlpVar,
    LinConstraint,
    Objective,
    Term,
    VarKind,
    normalize_terms,
)
from ilpsat.presolve.canonical import canonicalize
from ilpsat.presolve.propagation import Propagator, activity_bounds, propagate_bounds
from ilpsat.presolve.types import (
    Disposition,
    Fixed,
    Free,
    MultiAggregated,
    PresolveConfig,
    PresolveReport,
    ProbeResult,
    SimpleAggregated,
    SimplifiedModel,
    VarMap,
)

logger = logging.getLogger(__name__)


def _ge_form(row: LinConstraint) -> LinConstraint:
    return row.negated() if row.lhs is None else row


def _negate_lit(lit: IlpLit) -> IlpLit:
    return lit[0], not lit[1]


def _record_fixing(var_map: VarMap, var: int, value: int) -> int:
    disp = var_map.dispositions[var]
    if isinstance(disp, Free):
        var_map.dispositions[var] = Fixed(value)
        return 1
    if isinstance(disp, Fixed) and disp.value != value:
        raise InfeasibleError(f"variable {var} fixed to both 0 and 1")
    return 0


# ----------------------------------------------------------------------
# Indicator definitions
# ----------------------------------------------------------------------

def define_indicators(model: IlpModel) -> Tuple[IlpModel, int]:
    """
    Turn ``z -> (l1 v ... v lk)`` into ``z <-> (l1 v ... v lk)``.

    Applies to indicators with a positive objective coefficient that occur in
    no other row. Every optimum already has z equal to its clause, so the
    optimum and every Decision-variable solution are kept.
    """
    gain = {v: c for c, v in model.objective.terms}
    occurrences: Dict[int, List[int]] = {}
    for r, row in enumerate(model.constraints):
        for var in row.variables:
            occurrences.setdefault(var, []).append(r)

    rows = list(model.constraints)
    defined = 0
    for var in model.vars:
        if var.kind is not VarKind.INDICATOR or gain.get(var.index, 0) <= 0:
            continue
        where = occurrences.get(var.index, [])
        if len(where) != 1:
            continue
        lits = clause_literals(rows[where[0]])
        if lits is None or (var.index, True) not in lits:
            continue
        others = [lit for lit in lits if lit[0] != var.index]
        if not others:
            continue
        if len(others) == 1:
            other, negated = others[0]
            if negated:
                row = LinConstraint.build([(1, var.index), (1, other)], lhs=1, rhs=1)
            else:
                row = LinConstraint.build([(1, var.index), (-1, other)], lhs=0, rhs=0)
        else:
            # not z <-> AND(not l_i)
            row = and_row((var.index, True), [_negate_lit(lit) for lit in others])
        rows[where[0]] = classify_constraint(row)
        defined += 1

    if not defined:
        return model, 0
    return replace(model, constraints=rows), defined


# ----------------------------------------------------------------------
# Fixing and substitution
# ----------------------------------------------------------------------

def fix_from_bounds(model: IlpModel, var_map: VarMap) -> int:
    """Record a Fixed disposition for every free variable whose bounds coincide."""
    count = 0
    for var in model.vars:
        if var.is_fixed:
            count += _record_fixing(var_map, var.index, var.lower)
    return count


def _expand(terms: Iterable[Term], dispositions: List[Disposition]) -> Tuple[int, List[Term]]:
    constant = 0
    out: List[Term] = []
    for coef, var in terms:
        disp = dispositions[var]
        if isinstance(disp, Free):
            out.append((coef, var))
        elif isinstance(disp, Fixed):
            constant += coef * disp.value
        elif isinstance(disp, SimpleAggregated):
            if disp.negated:
                constant += coef
                out.append((-coef, disp.target))
            else:
                out.append((coef, disp.target))
        else:
            constant += coef * disp.c0
            out.extend((coef * c, v) for c, v in disp.terms)
    return constant, out


def substitute(model: IlpModel, var_map: VarMap) -> Tuple[IlpModel, int]:
    """
    Eliminate every non-free variable from rows and objective.

    Requires a canonical `var_map`. Returns the model and the objective
    constant produced by the eliminated variables.
    """
    lower = [v.lower for v in model.vars]
    upper = [v.upper for v in model.vars]
    rows: List[LinConstraint] = []
    for row in model.constraints:
        constant, expanded = _expand(row.terms, var_map.dispositions)
        terms = normalize_terms(expanded)
        if constant == 0 and terms == row.terms:
            rows.append(row)
            continue
        lhs = None if row.lhs is None else row.lhs - constant
        rhs = None if row.rhs is None else row.rhs - constant
        min_act, max_act = activity_bounds(LinConstraint(terms, lhs, rhs, row.cclass), lower, upper)
        if (lhs is not None and max_act < lhs) or (rhs is not None and min_act > rhs):
            raise InfeasibleError(f"row {row.to_dict()} is violated once its variables are substituted")
        if not terms:
            continue
        rows.append(classify_constraint(LinConstraint(terms, lhs, rhs, row.cclass)))

    constant, expanded = _expand(model.objective.terms, var_map.dispositions)
    objective = Objective(normalize_terms(expanded), model.objective.offset)
    return replace(model, constraints=rows, objective=objective), constant


# ----------------------------------------------------------------------
# Structure detection
# ----------------------------------------------------------------------

def detect_products(model: IlpModel) -> Tuple[IlpModel, int]:
    """
    Replace ``(l v not m1 v ... v not mn)`` plus the binary clauses
    ``(not l v mi)`` by one LogicalAnd row ``l <-> m1 * ... * mn``.

    Returns the model and the number of rows removed.
    """
    binaries: Dict[FrozenSet[IlpLit], int] = {}
    clauses: Dict[int, List[IlpLit]] = {}
    for r, row in enumerate(model.constraints):
        if row.cclass not in (ConstraintClass.LOGICAL_OR, ConstraintClass.SETPPC_PACKING):
            continue
        lits = clause_literals(row)
        if lits is None:
            continue
        if len(lits) == 2:
            binaries.setdefault(frozenset(lits), r)
        elif len(lits) >= 3 and row.cclass is ConstraintClass.LOGICAL_OR:
            clauses[r] = lits

    consumed: Set[int] = set()
    replaced: Dict[int, LinConstraint] = {}
    for r, lits in clauses.items():
        for out in lits:
            needed: List[int] = []
            for other in lits:
                if other == out:
                    continue
                b = binaries.get(frozenset((_negate_lit(out), _negate_lit(other))))
                if b is None or b in consumed:
                    break
                needed.append(b)
            else:
                replaced[r] = and_row(out, [_negate_lit(o) for o in lits if o != out])
                consumed.update(needed)
                break

    if not replaced:
        return model, 0
    rows = [replaced.get(r, row) for r, row in enumerate(model.constraints) if r not in consumed]
    logger.debug("Detected %d products, %d binary clauses absorbed", len(replaced), len(consumed))
    return replace(model, constraints=rows), len(consumed)


def _range_row(c0: int, terms: Tuple[Term, ...]) -> Optional[LinConstraint]:
    """Row keeping ``c0 + sum(c_i * y_i)`` inside [0, 1], or None when it always is."""
    low = c0 + sum(c for c, _ in terms if c < 0)
    high = c0 + sum(c for c, _ in terms if c > 0)
    if low >= 0 and high <= 1:
        return None
    row = LinConstraint.build(terms, lhs=-c0 if low < 0 else None, rhs=1 - c0 if high > 1 else None)
    return classify_constraint(_ge_form(row))


def detect_aggregations(
    model: IlpModel,
    multi_aggregation: bool = True,
    protected: Optional[Iterable[int]] = None,
) -> Tuple[IlpModel, List[Tuple[int, Disposition]]]:
    """
    Consume equality rows that define one variable through the others.

    Two-term rows ``a*y_i + b*y_j = k`` (a, b in {-1, 1}, i < j) aggregate
    y_j onto y_i when they read as equality or negation. Longer rows
    multi-aggregate their highest-index unit-coefficient variable that is
    not `protected` (default: the objective variables). A multi-aggregation
    whose expression can leave [0, 1] leaves a range row behind.
    """
    guarded: Set[int] = set(protected if protected is not None else (v for _, v in model.objective.terms))
    aggregated: Dict[int, Disposition] = {}
    targets: Set[int] = set()
    rows: List[LinConstraint] = []

    for row in model.constraints:
        if not row.is_equality or len(row.terms) < 2 or any(v in aggregated for v in row.variables):
            rows.append(row)
            continue
        k = row.lhs
        if len(row.terms) == 2 and all(abs(c) == 1 for c, _ in row.terms):
            (a, i), (b, j) = row.terms
            c0, c1 = b * k, -a * b
            if (c0, c1) in ((0, 1), (1, -1)) and j not in targets:
                aggregated[j] = SimpleAggregated(i, c1 == -1)
                targets.add(i)
                if j in guarded:
                    guarded.add(i)
                continue
            rows.append(row)
            continue

        if not multi_aggregation or row.cclass is ConstraintClass.SETPPC_PARTITIONING:
            rows.append(row)
            continue
        pivots = [(c, v) for c, v in row.terms if abs(c) == 1 and v not in guarded and v not in targets]
        if not pivots:
            rows.append(row)
            continue
        a_p, pivot = pivots[-1]
        c0 = a_p * k
        terms = tuple((-c * a_p, v) for c, v in row.terms if v != pivot)
        aggregated[pivot] = MultiAggregated(c0, terms)
        targets.update(v for _, v in terms)
        residual = _range_row(c0, terms)
        if residual is not None:
            rows.append(residual)

    if not aggregated:
        return model, []
    return replace(model, constraints=rows), sorted(aggregated.items())


# ----------------------------------------------------------------------
# Row cleanup
# ----------------------------------------------------------------------

def remove_redundant(model: IlpModel) -> Tuple[IlpModel, int]:
    """
    Drop row sides implied by activity bounds; rows left with no side go.

    Returns the model and the number of rows removed.
    """
    lower = [v.lower for v in model.vars]
    upper = [v.upper for v in model.vars]
    rows: List[LinConstraint] = []
    removed = 0
    for row in model.constraints:
        min_act, max_act = activity_bounds(row, lower, upper)
        if (row.rhs is not None and min_act > row.rhs) or (row.lhs is not None and max_act < row.lhs):
            raise InfeasibleError(f"row {row.to_dict()} cannot be satisfied (activity in [{min_act}, {max_act}])")
        lhs = None if row.lhs is None or min_act >= row.lhs else row.lhs
        rhs = None if row.rhs is None or max_act <= row.rhs else row.rhs
        if lhs is None and rhs is None:
            removed += 1
            continue
        if (lhs, rhs) != (row.lhs, row.rhs):
            row = classify_constraint(LinConstraint(row.terms, lhs, rhs, row.cclass))
        rows.append(row)
    if not removed and rows == model.constraints:
        return model, 0
    return replace(model, constraints=rows), removed


def tighten_coefficients(model: IlpModel) -> Tuple[IlpModel, int]:
    """
    Clip coefficients of one-sided rows to the row's slack.

    For ``sum(a_i * y_i) >= L`` with slack ``d = L - min_act > 0``, any
    ``a_i > d`` becomes d and any ``a_i < -d`` becomes -d with L raised by
    ``|a_i| - d``. The 0-1 solution set is unchanged.
    """
    rows: List[LinConstraint] = []
    changed = 0
    for row in model.constraints:
        if (row.lhs is not None and row.rhs is not None) or any(model.vars[v].is_fixed for v in row.variables):
            rows.append(row)
            continue
        ge = _ge_form(row)
        slack = ge.lhs - sum(c for c, _ in ge.terms if c < 0)
        if slack <= 0 or all(abs(c) <= slack for c, _ in ge.terms):
            rows.append(row)
            continue
        lhs = ge.lhs
        terms: List[Term] = []
        for coef, var in ge.terms:
            if coef > slack:
                terms.append((slack, var))
            elif coef < -slack:
                terms.append((-slack, var))
                lhs += -coef - slack
            else:
                terms.append((coef, var))
        rows.append(classify_constraint(LinConstraint.build(terms, lhs=lhs, rhs=None, cclass=row.cclass)))
        changed += 1
    if not changed:
        return model, 0
    return replace(model, constraints=rows), changed


def deduplicate(model: IlpModel) -> Tuple[IlpModel, int]:
    """
    Merge rows whose terms agree up to sign by intersecting their ranges.

    Rows are kept in first-occurrence order; returns the model and the
    number of rows removed.
    """
    groups: Dict[Tuple[Term, ...], List[Tuple[LinConstraint, LinConstraint]]] = {}
    for row in model.constraints:
        normed = row.negated() if row.terms and row.terms[0][0] < 0 else row
        groups.setdefault(normed.terms, []).append((normed, row))

    if len(groups) == len(model.constraints):
        return model, 0

    rows: List[LinConstraint] = []
    for terms, members in groups.items():
        if len(members) == 1:
            rows.append(members[0][1])
            continue
        lows = [n.lhs for n, _ in members if n.lhs is not None]
        highs = [n.rhs for n, _ in members if n.rhs is not None]
        lhs = max(lows) if lows else None
        rhs = min(highs) if highs else None
        if lhs is not None and rhs is not None and lhs > rhs:
            raise InfeasibleError(f"rows over {list(terms)} have disjoint ranges")

        kept = next((orig for n, orig in members if (n.lhs, n.rhs) == (lhs, rhs)), None)
        if kept is None:
            classes = {orig.cclass for _, orig in members}
            cclass = classes.pop() if len(classes) == 1 else ConstraintClass.GENERAL_LINEAR
            merged = LinConstraint(terms, lhs, rhs, cclass)
            kept = classify_constraint(_ge_form(merged))
        rows.append(kept)

    return replace(model, constraints=rows), len(model.constraints) - len(rows)


# ----------------------------------------------------------------------
# Probing
# ----------------------------------------------------------------------

def probe_variable(model: IlpModel, var: int, propagator: Optional[Propagator] = None) -> ProbeResult:
    """
    Try both values of ``var`` and collect what holds in every feasible branch.

    `propagator` must already be at fixpoint; without one, the model is
    propagated first and its own fixings are part of the result. The model
    is never modified.
    """
    base_fixings: List[Tuple[int, int]] = []
    if propagator is None:
        propagator = Propagator.for_model(model)
        base_fixings = propagator.propagate()
    if propagator.is_fixed(var):
        return ProbeResult(var, fixings=tuple(sorted(base_fixings)))

    branches: List[Optional[Dict[int, int]]] = []
    for value in (0, 1):
        trial = propagator.copy()
        try:
            branches.append(dict(trial.propagate(assume=[(var, value)], rows=())))
        except InfeasibleError:
            branches.append(None)

    zero, one = branches
    if zero is None and one is None:
        raise InfeasibleError(f"both values of variable {var} lead to a conflict")
    if zero is None or one is None:
        implied = one if zero is None else zero
        return ProbeResult(var, fixings=tuple(sorted(set(base_fixings) | set(implied.items()))))

    fixings = list(base_fixings)
    aggregations: List[Tuple[int, int, bool]] = []
    for w in sorted(zero.keys() & one.keys()):
        if w == var:
            continue
        if zero[w] == one[w]:
            fixings.append((w, zero[w]))
        else:
            aggregations.append((w, var, zero[w] == 1))
    return ProbeResult(var, tuple(sorted(fixings)), tuple(aggregations))


def _probe_round(model: IlpModel, var_map: VarMap, config: PresolveConfig, budget: int) -> Tuple[int, int, int]:
    base = Propagator.for_model(model)
    fixed = 0
    for w, value in base.propagate():
        fixed += _record_fixing(var_map, w, value)

    occurring = sorted({v for row in model.constraints for v in row.variables})
    candidates = [v for v in occurring if var_map.is_free(v) and not base.is_fixed(v)][:budget]
    if config.probe_workers > 1 and len(candidates) > 1:
        with ThreadPoolExecutor(max_workers=config.probe_workers) as pool:
            results = list(pool.map(lambda v: probe_variable(model, v, base), candidates))
    else:
        results = [probe_variable(model, v, base) for v in candidates]

    aggregated = 0
    for result in results:
        for w, value in result.fixings:
            fixed += _record_fixing(var_map, w, value)
        for w, v, negated in result.aggregations:
            high, low = max(w, v), min(w, v)
            if var_map.is_free(high) and var_map.is_free(low):
                var_map.dispositions[high] = SimpleAggregated(low, negated)
                aggregated += 1
    logger.debug("Probed %d variables: %d fixings, %d aggregations", len(candidates), fixed, aggregated)
    return fixed, aggregated, len(candidates)


# ----------------------------------------------------------------------
# Driver
# ----------------------------------------------------------------------

def _size(model: IlpModel, var_map: VarMap) -> int:
    return len(var_map.free_vars()) + len(model.constraints)


def _reindexed(model: IlpModel, var_map: VarMap) -> IlpModel:
    index = var_map.new_index_of

    def remap(terms: Tuple[Term, ...]) -> Tuple[Term, ...]:
        return tuple((c, index[v]) for c, v in terms)

    vars_ = [IlpVar(index=index[v.index], kind=v.kind, origin=v.origin) for v in model.vars if v.index in index]
    rows = [replace(row, terms=remap(row.terms)) for row in model.constraints]
    objective = Objective(remap(model.objective.terms), model.objective.offset)
    return replace(model, vars=vars_, constraints=rows, objective=objective)


def presolve(model: IlpModel, config: Optional[PresolveConfig] = None) -> SimplifiedModel:
    """
    Simplify ``model`` in rounds until it stops shrinking or
    ``config.max_rounds`` is reached.

    Raises InfeasibleError when the model has no feasible point.
    """
    config = config or PresolveConfig()
    started = time.perf_counter()
    original_vars = list(model.vars)
    original_rows = len(model.constraints)
    var_map = VarMap.identity(model.num_vars)
    delta = 0
    probe_budget = config.probe_limit if config.probing else 0

    if config.define_indicators:
        model, defined = define_indicators(model)
        logger.debug("Defined %d indicators", defined)

    rounds = 0
    size = _size(model, var_map)
    while rounds < config.max_rounds:
        rounds += 1
        model, _ = propagate_bounds(model)
        fix_from_bounds(model, var_map)
        var_map = canonicalize(var_map)
        model, constant = substitute(model, var_map)
        delta += constant

        if config.detect_products:
            model, _ = detect_products(model)
        model, found = detect_aggregations(model, config.multi_aggregation)
        for var, disp in found:
            var_map.dispositions[var] = disp
        var_map = canonicalize(var_map)
        model, constant = substitute(model, var_map)
        delta += constant

        model, _ = remove_redundant(model)
        model, _ = tighten_coefficients(model)
        model, _ = deduplicate(model)

        if probe_budget > 0 and model.constraints:
            _, _, used = _probe_round(model, var_map, config, probe_budget)
            probe_budget -= used

        new_size = _size(model, var_map)
        logger.debug("Presolve round %d: size %d -> %d", rounds, size, new_size)
        if new_size >= size:
            break
        size = new_size

    var_map = canonicalize(var_map)
    model, constant = substitute(model, var_map)
    delta += constant
    model, _ = remove_redundant(model)
    model, _ = deduplicate(model)

    report = PresolveReport.from_var_map(
        original_vars,
        var_map,
        removed_constraints=max(0, original_rows - len(model.constraints)),
        rounds_executed=rounds,
        preprocessing_time_seconds=time.perf_counter() - started,
    )
    simplified = SimplifiedModel(
        model=_reindexed(model, var_map),
        var_map=var_map,
        original_vars=original_vars,
        objective_offset_delta=delta,
        report=report,
    )
    logger.info(
        "Presolve finished after %d rounds: %d fixed, %d aggregated, %d rows removed",
        rounds,
        report.fixed_vars,
        report.aggregated,
        report.removed_constraints,
    )
    return simplified
