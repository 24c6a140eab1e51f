"""Least fixpoint over quasi-interpretations.

A quasi-rule ``p <- not q1, ..., not qk`` has no positive body.  One
application of the transformation resolves every positive body atom of a
program rule against quasi-rules already derived for it.  Iterating from
the empty set reaches the least fixpoint, a purely negative program whose
supported models are the stable models of the original program.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bn import DEFAULT_FP_BUDGET, encode, fixed_points
from .errors import BudgetExceeded
from .program import Program, Rule

__all__ = [
    "QuasiRule",
    "DEFAULT_LFP_BUDGET",
    "tp_transform",
    "least_fixpoint",
    "lfp_program",
    "stable_via_lfp",
]

DEFAULT_LFP_BUDGET = 100_000


@dataclass(frozen=True, order=True)
class QuasiRule:
    head: int
    nbody: frozenset = frozenset()

    def as_rule(self) -> Rule:
        return Rule(self.head, frozenset(), self.nbody)


def _mask(atoms) -> int:
    m = 0
    for a in atoms:
        m |= 1 << a
    return m


def _unmask(m: int) -> frozenset:
    out = []
    i = 0
    while m:
        if m & 1:
            out.append(i)
        m >>= 1
        i += 1
    return frozenset(out)


def _tp_masks(P: Program, by_head: dict, budget: int) -> set:
    # Quasi-rules as (head, nbody bitmask); partial unions are deduplicated
    # after each body atom, which keeps the cross product in check.
    out: set = set()
    for r in P.rules:
        partial = {_mask(r.nbody)}
        for q in r.pbody:
            choices = by_head.get(q)
            if not choices:
                partial = set()
                break
            partial = {m | c for m in partial for c in choices}
        for m in partial:
            out.add((r.head, m))
        if len(out) > budget:
            raise BudgetExceeded(f"least fixpoint exceeded {budget} quasi-rules")
    return out


def _index(masks) -> dict:
    by_head: dict = {}
    for h, m in masks:
        by_head.setdefault(h, set()).add(m)
    return by_head


def tp_transform(P: Program, Q, budget: int = DEFAULT_LFP_BUDGET) -> frozenset:
    """One application of the immediate-consequence step on quasi-rules."""
    by_head = _index((qr.head, _mask(qr.nbody)) for qr in Q)
    return frozenset(QuasiRule(h, _unmask(m)) for h, m in _tp_masks(P, by_head, budget))


def least_fixpoint(P: Program, budget: int = DEFAULT_LFP_BUDGET) -> frozenset:
    """Iterate the transformation from the empty set until nothing new appears."""
    current: set = set()
    while True:
        nxt = _tp_masks(P, _index(current), budget)
        if not current <= nxt:
            raise AssertionError("quasi-rule chain is not monotone")
        if nxt == current:
            break
        current = nxt
    return frozenset(QuasiRule(h, _unmask(m)) for h, m in current)


def lfp_program(P: Program, Q) -> Program:
    """View a quasi-program as a program over ``P``'s atom table."""
    return Program(P.atoms, tuple(qr.as_rule() for qr in sorted(Q, key=_qr_key)))


def _qr_key(qr: QuasiRule):
    return (qr.head, len(qr.nbody), sorted(qr.nbody))


def stable_via_lfp(
    P: Program, budget: int = DEFAULT_LFP_BUDGET, fp_budget: int = DEFAULT_FP_BUDGET
) -> list:
    """Stable models of ``P`` as the supported models of its least fixpoint."""
    Q = least_fixpoint(P, budget)
    return fixed_points(encode(lfp_program(P, Q)), fp_budget)
