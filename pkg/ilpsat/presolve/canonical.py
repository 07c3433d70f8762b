"""
Path compression of a VarMap.

After `canonicalize` every SimpleAggregated variable points at a Free
variable, every MultiAggregated expression is written over Free variables
only, and aggregations that collapse to a constant become Fixed.
"""

import logging
from typing import Dict, List, Set, Tuple, Union

from ilpsat.errors import InfeasibleError, PresolveError
from ilpsat.presolve.types import (
    FREE,
    Disposition,
    Fixed,
    Free,
    MultiAggregated,
    SimpleAggregated,
    VarMap,
)

logger = logging.getLogger(__name__)

# terminal of a simple chain: ("free", var), ("fixed", value) or ("multi", var)
_Terminal = Tuple[str, int]
_Expr = Tuple[int, Dict[int, int]]


class _Canonicalizer:
    def __init__(self, dispositions: List[Disposition]):
        self.disp = list(dispositions)
        self.n = len(self.disp)
        self.chain: Dict[int, Tuple[_Terminal, bool]] = {}
        self.exprs: Dict[int, _Expr] = {}

    def _check_index(self, var: int) -> None:
        if not 0 <= var < self.n:
            raise PresolveError(f"aggregation refers to unknown variable {var}")

    # ------------------------------------------------------------------
    # simple chains
    # ------------------------------------------------------------------
    def resolve(self, var: int) -> Tuple[_Terminal, bool]:
        """Terminal of the simple chain starting at ``var`` and the composed polarity."""
        while True:
            path: List[Tuple[int, bool]] = []
            position: Dict[int, int] = {}
            cur, pol = var, False
            restart = False

            while True:
                if cur in self.chain:
                    terminal, tail = self.chain[cur]
                    pol ^= tail
                    break
                d = self.disp[cur]
                if not isinstance(d, SimpleAggregated):
                    if isinstance(d, Fixed):
                        terminal = ("fixed", d.value)
                    elif isinstance(d, MultiAggregated):
                        terminal = ("multi", cur)
                    else:
                        terminal = ("free", cur)
                    break
                if cur in position:
                    k = position[cur]
                    if pol ^ path[k][1]:
                        raise InfeasibleError(f"variable {cur} is aggregated onto its own negation")
                    cycle = [v for v, _ in path[k:]]
                    rep = min(cycle)
                    # even cycle: all members are equal up to polarity, keep the lowest index
                    self.disp[rep] = FREE
                    logger.debug("Merged aggregation cycle %s onto %d", cycle, rep)
                    restart = True
                    break
                position[cur] = len(path)
                path.append((cur, pol))
                self._check_index(d.target)
                pol ^= d.negated
                cur = d.target

            if restart:
                continue
            for node, rel in path:
                self.chain[node] = (terminal, pol ^ rel)
            return terminal, pol

    # ------------------------------------------------------------------
    # multi-aggregated expressions
    # ------------------------------------------------------------------
    def _add_scaled(self, expr: _Expr, coef: int, var: int, stack: Set[int]) -> _Expr:
        c0, coefs = expr
        d = self.disp[var]
        if isinstance(d, Fixed):
            return c0 + coef * d.value, coefs
        if isinstance(d, Free):
            coefs[var] = coefs.get(var, 0) + coef
            return c0, coefs

        if isinstance(d, SimpleAggregated):
            terminal, pol = self.resolve(var)
        else:
            terminal, pol = ("multi", var), False

        kind, ref = terminal
        if kind == "fixed":
            return c0 + coef * (1 - ref if pol else ref), coefs
        if kind == "free":
            if pol:
                c0 += coef
                coefs[ref] = coefs.get(ref, 0) - coef
            else:
                coefs[ref] = coefs.get(ref, 0) + coef
            return c0, coefs

        sub_c0, sub_coefs = self.expand(ref, stack)
        sign = -1 if pol else 1
        c0 += coef * (1 - sub_c0 if pol else sub_c0)
        for v, c in sub_coefs.items():
            coefs[v] = coefs.get(v, 0) + sign * coef * c
        return c0, coefs

    def expand(self, var: int, stack: Set[int]) -> _Expr:
        if var in self.exprs:
            c0, coefs = self.exprs[var]
            return c0, dict(coefs)
        if var in stack:
            raise PresolveError(f"recursive multi-aggregation through variable {var}")
        d = self.disp[var]
        assert isinstance(d, MultiAggregated)
        stack.add(var)
        expr: _Expr = (d.c0, {})
        for coef, term_var in d.terms:
            self._check_index(term_var)
            expr = self._add_scaled(expr, coef, term_var, stack)
        stack.discard(var)
        c0, coefs = expr
        coefs = {v: c for v, c in coefs.items() if c != 0}
        self.exprs[var] = (c0, coefs)
        return c0, dict(coefs)

    # ------------------------------------------------------------------
    def _collapse(self, var: int, c0: int, coefs: Dict[int, int]) -> Disposition:
        if not coefs:
            if c0 not in (0, 1):
                raise InfeasibleError(f"variable {var} aggregated to constant {c0}")
            return Fixed(c0)
        if len(coefs) == 1:
            (v, c), = coefs.items()
            if (c0, c) == (0, 1):
                return SimpleAggregated(v, False)
            if (c0, c) == (1, -1):
                return SimpleAggregated(v, True)
        return MultiAggregated(c0, tuple((c, v) for v, c in sorted(coefs.items())))

    def run(self) -> List[Disposition]:
        for var in range(self.n):
            d = self.disp[var]
            if isinstance(d, SimpleAggregated):
                self._check_index(d.target)
                self.resolve(var)
        for var in range(self.n):
            if isinstance(self.disp[var], MultiAggregated):
                self.expand(var, set())

        out: List[Disposition] = []
        for var in range(self.n):
            d = self.disp[var]
            if isinstance(d, (Fixed, Free)):
                out.append(d)
            elif isinstance(d, MultiAggregated):
                c0, coefs = self.exprs[var]
                out.append(self._collapse(var, c0, coefs))
            else:
                (kind, ref), pol = self.chain[var]
                if kind == "free":
                    out.append(SimpleAggregated(ref, pol))
                elif kind == "fixed":
                    out.append(Fixed(1 - ref if pol else ref))
                else:
                    c0, coefs = self.exprs[ref]
                    if pol:
                        c0, coefs = 1 - c0, {v: -c for v, c in coefs.items()}
                    out.append(self._collapse(var, c0, coefs))
        return out


def canonicalize(var_map: VarMap) -> VarMap:
    """
    Collapse aggregation chains.

    Even cycles merge onto their lowest index; a variable aggregated onto its
    own negation raises InfeasibleError. Recursive multi-aggregations raise
    PresolveError. Idempotent.
    """
    dispositions = _Canonicalizer(var_map.dispositions).run()
    result = VarMap(dispositions)
    result.reindex()
    return result
