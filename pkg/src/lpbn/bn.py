"""Boolean-network encoding of a program and fixed-point machinery.

Each atom ``v`` gets the update function ``f_v``: the disjunction of the
body formulas of the rules with head ``v``, kept verbatim as a DNF.  States
are frozensets of atom ids, exactly like interpretations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceeded
from .program import Program
from .sgraph import MINUS, PLUS, SignedDigraph

__all__ = [
    "Term",
    "DnfFunction",
    "BooleanNetwork",
    "SupportCapExceeded",
    "DEFAULT_FP_BUDGET",
    "DEFAULT_SUPPORT_CAP",
    "encode",
    "evaluate",
    "step",
    "is_fixed_point",
    "fixed_points",
    "influence_graph",
    "influence_graph_with_fallback",
    "clark_completion",
    "completion_holds",
    "state_bits",
    "parse_bits",
    "sort_states",
]

DEFAULT_FP_BUDGET = 10**6
DEFAULT_SUPPORT_CAP = 24


@dataclass(frozen=True)
class Term:
    pos: frozenset = frozenset()
    neg: frozenset = frozenset()

    @property
    def contradictory(self) -> bool:
        return bool(self.pos & self.neg)

    def holds(self, state) -> bool:
        return self.pos <= state and not (self.neg & state)

    def atoms(self) -> frozenset:
        return self.pos | self.neg


@dataclass(frozen=True)
class DnfFunction:
    """Disjunction of conjunctive terms; no terms means constant 0."""

    terms: tuple = ()

    def __call__(self, state) -> bool:
        return any(t.holds(state) for t in self.terms)

    def support(self) -> frozenset:
        out: frozenset = frozenset()
        for t in self.terms:
            out |= t.atoms()
        return out

    def format(self, names) -> str:
        if not self.terms:
            return "0"
        parts = []
        for t in self.terms:
            lits = [(a, 0) for a in t.pos] + [(a, 1) for a in t.neg]
            lits.sort()
            parts.append(" & ".join(("!" if neg else "") + names[a] for a, neg in lits) or "1")
        return " | ".join(parts)


@dataclass(frozen=True)
class BooleanNetwork:
    names: tuple
    functions: tuple  # functions[v] is f_v

    @property
    def n(self) -> int:
        return len(self.functions)

    @property
    def variables(self) -> range:
        return range(self.n)

    def format(self) -> str:
        return "\n".join(f"f_{self.names[v]} = {f.format(self.names)}" for v, f in enumerate(self.functions))


class SupportCapExceeded(ValueError):
    pass


def encode(P: Program) -> BooleanNetwork:
    terms: list = [[] for _ in range(P.n)]
    for r in P.rules:
        terms[r.head].append(Term(r.pbody, r.nbody))
    return BooleanNetwork(P.atoms, tuple(DnfFunction(tuple(ts)) for ts in terms))


def evaluate(f: BooleanNetwork, v: int, state) -> bool:
    return f.functions[v](state)


def step(f: BooleanNetwork, state) -> frozenset:
    """Synchronous successor state."""
    return frozenset(v for v in f.variables if f.functions[v](state))


def is_fixed_point(f: BooleanNetwork, state) -> bool:
    return step(f, state) == frozenset(state)


def state_bits(state, n: int) -> str:
    return "".join("1" if v in state else "0" for v in range(n))


def parse_bits(bits: str) -> frozenset:
    return frozenset(i for i, c in enumerate(bits) if c == "1")


def sort_states(states, n: int) -> list:
    return sorted(states, key=lambda s: state_bits(s, n))


# -- fixed-point enumeration -------------------------------------------------

_TRUE, _FALSE, _OPEN = 1, 0, -1


def _term_status(term: Term, val) -> int:
    status = _TRUE
    for a in term.pos:
        x = val[a]
        if x == 0:
            return _FALSE
        if x is None:
            status = _OPEN
    for a in term.neg:
        x = val[a]
        if x == 1:
            return _FALSE
        if x is None:
            status = _OPEN
    return status


def _propagate(live, val, trail) -> bool:
    """Unit propagation on ``v <-> f_v``; False on conflict."""
    n = len(val)
    changed = True
    while changed:
        changed = False
        for v in range(n):
            statuses = [_term_status(t, val) for t in live[v]]
            if any(s == _TRUE for s in statuses):
                forced = 1
            elif all(s == _FALSE for s in statuses):
                forced = 0
            else:
                forced = None
            if forced is not None:
                if val[v] is None:
                    val[v] = forced
                    trail.append(v)
                    changed = True
                elif val[v] != forced:
                    return False
                continue
            if val[v] is None:
                continue
            open_terms = [t for t, s in zip(live[v], statuses) if s == _OPEN]
            if val[v] == 1 and len(open_terms) == 1:
                # The only surviving term must hold.
                t = open_terms[0]
                for a in t.pos:
                    if val[a] is None:
                        val[a] = 1
                        trail.append(a)
                        changed = True
                for a in t.neg:
                    if val[a] is None:
                        val[a] = 0
                        trail.append(a)
                        changed = True
            elif val[v] == 0:
                # Every term must fail; one undecided literal left means it fails.
                for t in open_terms:
                    # Earlier assignments in this loop may already falsify t.
                    if _term_status(t, val) != _OPEN:
                        continue
                    undecided = [(a, 1) for a in t.pos if val[a] is None]
                    undecided += [(a, 0) for a in t.neg if val[a] is None]
                    if len(undecided) == 1:
                        a, bad = undecided[0]
                        val[a] = 1 - bad
                        trail.append(a)
                        changed = True
    return True


def fixed_points(f: BooleanNetwork, budget: int = DEFAULT_FP_BUDGET) -> list:
    """All fixed points, sorted by bit-string.

    Backtracking over variables in id order, 0 before 1, with propagation
    on the equivalences ``v <-> f_v``.  ``budget`` caps search nodes; on
    exhaustion ``BudgetExceeded.partial`` holds the points found so far.
    """
    n = f.n
    live = [tuple(t for t in fn.terms if not t.contradictory) for fn in f.functions]
    val: list = [None] * n
    found = set()
    nodes = 0

    def search() -> None:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(
                f"fixed-point search exceeded {budget} nodes", sort_states(found, n)
            )
        trail: list = []
        try:
            if not _propagate(live, val, trail):
                return
            free = next((v for v in range(n) if val[v] is None), None)
            if free is None:
                state = frozenset(v for v in range(n) if val[v] == 1)
                if is_fixed_point(f, state):
                    found.add(state)
                return
            for choice in (0, 1):
                val[free] = choice
                search()
                val[free] = None
        finally:
            for v in trail:
                val[v] = None

    search()
    return sort_states(found, n)


# -- influence graph ---------------------------------------------------------

def _truth_table(fn: DnfFunction, support: list) -> np.ndarray:
    k = len(support)
    idx = np.arange(1 << k, dtype=np.int64)
    col = {a: ((idx >> i) & 1).astype(bool) for i, a in enumerate(support)}
    table = np.zeros(1 << k, dtype=bool)
    for t in fn.terms:
        if t.contradictory:
            continue
        term = np.ones(1 << k, dtype=bool)
        for a in t.pos:
            term &= col[a]
        for a in t.neg:
            term &= ~col[a]
        table |= term
    return table


def influence_graph(f: BooleanNetwork, mode: str = "semantic", cap: int = DEFAULT_SUPPORT_CAP) -> SignedDigraph:
    """Influence graph of ``f``.

    ``semantic`` is exact: arc ``(u, v, +)`` iff flipping ``u`` from 0 to 1
    raises ``f_v`` in some state, found by scanning the truth table over
    the support of ``f_v``.  ``syntactic`` reads literal polarities off the
    DNF and over-approximates.
    """
    arcs = set()
    if mode == "syntactic":
        for v, fn in enumerate(f.functions):
            for t in fn.terms:
                arcs.update((u, v, PLUS) for u in t.pos)
                arcs.update((u, v, MINUS) for u in t.neg)
    elif mode == "semantic":
        for v, fn in enumerate(f.functions):
            support = sorted(fn.support())
            if len(support) > cap:
                raise SupportCapExceeded(
                    f"f_{f.names[v]} depends on {len(support)} atoms (cap {cap})"
                )
            if not support:
                continue
            table = _truth_table(fn, support)
            k = len(support)
            for i, u in enumerate(support):
                # Axis 1 of the reshaped table is bit i of the index.
                cube = table.reshape(1 << (k - i - 1), 2, 1 << i)
                low, high = cube[:, 0, :], cube[:, 1, :]
                if np.any(high & ~low):
                    arcs.add((u, v, PLUS))
                if np.any(low & ~high):
                    arcs.add((u, v, MINUS))
    else:
        raise ValueError(f"unknown influence-graph mode {mode!r}")
    return SignedDigraph(tuple(f.variables), frozenset(arcs), f.names)


def influence_graph_with_fallback(f: BooleanNetwork, mode: str = "semantic", cap: int = DEFAULT_SUPPORT_CAP):
    """``(graph, exact)``; semantic mode degrades to syntactic past the cap."""
    if mode == "syntactic":
        return influence_graph(f, "syntactic"), False
    try:
        return influence_graph(f, "semantic", cap), True
    except SupportCapExceeded:
        return influence_graph(f, "syntactic"), False


# -- Clark completion --------------------------------------------------------

def clark_completion(P: Program) -> dict:
    """Map each atom id to the DNF right-hand side of its completion equivalence."""
    f = encode(P)
    return {v: f.functions[v] for v in f.variables}


def completion_holds(completion: dict, state) -> bool:
    state = frozenset(state)
    return all((v in state) == rhs(state) for v, rhs in completion.items())
