"""Brute-force ground truth for small instances.

Nothing here shares code with the search procedures it is used to check:
models are found by scanning every interpretation against the textbook
definitions, and cycles by plain depth-first enumeration.
"""

from __future__ import annotations

from itertools import product

from .errors import BudgetExceeded
from .program import Program, is_stable_model, is_supported_model
from .sgraph import CycleWitness, Sign, SignedDigraph

__all__ = [
    "SIZE_CAP",
    "SizeCapExceeded",
    "all_interpretations",
    "enumerate_stable_bruteforce",
    "enumerate_supported_bruteforce",
    "enumerate_fixed_points_bruteforce",
    "enumerate_signed_cycles",
]

SIZE_CAP = 22


class SizeCapExceeded(ValueError):
    pass


def _check_size(n: int) -> None:
    if n > SIZE_CAP:
        raise SizeCapExceeded(f"{n} atoms exceeds the brute-force cap of {SIZE_CAP}")


def all_interpretations(n: int):
    """Every subset of ``range(n)``, in bit-string order (atom 0 most significant)."""
    for bits in product((0, 1), repeat=n):
        yield frozenset(i for i, b in enumerate(bits) if b)


def enumerate_stable_bruteforce(P: Program) -> list:
    _check_size(P.n)
    return [I for I in all_interpretations(P.n) if is_stable_model(P, I)]


def enumerate_supported_bruteforce(P: Program) -> list:
    _check_size(P.n)
    return [I for I in all_interpretations(P.n) if is_supported_model(P, I)]


def enumerate_fixed_points_bruteforce(f) -> list:
    _check_size(f.n)
    out = []
    for s in all_interpretations(f.n):
        if all(fn(s) == (v in s) for v, fn in enumerate(f.functions)):
            out.append(s)
    return out


def enumerate_signed_cycles(G: SignedDigraph, cap: int = 10**5) -> list:
    """All simple cycles with arc signs; one entry per choice of parallel arc.

    Each cycle starts at its smallest vertex; the list is sorted by vertex
    sequence, then signs.  More than ``cap`` cycles raises
    ``BudgetExceeded`` with the sorted partial list attached.
    """
    arcs: dict = {}
    for u, v, s in G.arcs:
        arcs.setdefault(u, []).append((v, s))
    out: list = []

    def emit(cyc):
        out.append(cyc)
        if len(out) > cap:
            raise BudgetExceeded(f"more than {cap} cycles", sorted(out, key=_order))

    for start in G.vertices:
        # Only vertices above ``start`` may be visited, so each cycle is
        # produced exactly once, rooted at its minimum.
        path = [start]
        signs: list = []
        on_path = {start}

        def dfs(u):
            for v, s in arcs.get(u, ()):
                if v == start:
                    emit(CycleWitness(tuple(path) + (start,), tuple(signs) + (s,)))
                elif v > start and v not in on_path:
                    path.append(v)
                    signs.append(s)
                    on_path.add(v)
                    dfs(v)
                    on_path.discard(v)
                    signs.pop()
                    path.pop()

        dfs(start)
    return sorted(out, key=_order)


def _order(c: CycleWitness):
    return (c.vertices, tuple(s is Sign.MINUS for s in c.signs))
