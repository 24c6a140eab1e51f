"""Static verdicts on the number of stable models, and the solving pipeline.

Every structural result about the dependence graph contributes a sound
interval for ``|SM(P)|``; the report intersects them.  When asked, exact
models are computed from the fixed points of the encoded network and
checked against the combined interval.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field

from . import bn, oracle
from .errors import BudgetExceeded, Inapplicable, SoundnessError
from .fixpoint import DEFAULT_LFP_BUDGET, stable_via_lfp
from .program import Program, is_stable_model
from .sgraph import (
    DEFAULT_CYCLE_BUDGET,
    MINUS,
    PLUS,
    SignedDigraph,
    balance_bipartition,
    dependence_graph,
    has_negative_cycle,
    has_positive_cycle,
    is_acyclic,
    is_locally_stratified,
    is_single_cycle,
    positive_dependence_graph,
    positive_feedback_vertex_set,
    strongly_connected_components,
)

__all__ = [
    "Status",
    "CountInterval",
    "Verdict",
    "AnalysisOptions",
    "AnalysisReport",
    "METHODS",
    "TAGS",
    "analyze",
    "construct_complementary_pair",
    "solve",
]

METHODS = ("fixedpoint-filter", "lfp", "bruteforce")
DEFAULT_SOLVE_CAP = 20

TAGS = (
    "Fages",
    "Acyclic",
    "SinglePosCycle",
    "SingleNegCycle",
    "NoPosCycle",
    "NoPosCycleNoFact",
    "PfvsBound",
    "NoNegCycle",
    "LocallyStratified",
    "ComplementaryPair",
)


class Status(str, enum.Enum):
    FIRED = "fired"
    NOT_APPLICABLE = "not-applicable"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class CountInterval:
    lo: int = 0
    hi: int | None = None  # None: unbounded

    def __post_init__(self):
        if self.lo < 0 or (self.hi is not None and self.hi < self.lo):
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    def __and__(self, other: "CountInterval") -> "CountInterval":
        lo = max(self.lo, other.lo)
        his = [h for h in (self.hi, other.hi) if h is not None]
        hi = min(his) if his else None
        if hi is not None and hi < lo:
            raise SoundnessError(f"intervals {self} and {other} do not intersect")
        return CountInterval(lo, hi)

    def __contains__(self, k: int) -> bool:
        return k >= self.lo and (self.hi is None or k <= self.hi)

    def to_json(self) -> list:
        return [self.lo, self.hi]

    def __str__(self) -> str:
        hi = "inf" if self.hi is None else self.hi
        return f"[{self.lo}, {hi}]"

    def describe(self) -> str:
        if self.hi == self.lo:
            return f"exactly {self.lo}"
        if self.hi is None:
            return f"at least {self.lo}"
        if self.lo == 0:
            return f"at most {self.hi}"
        return f"between {self.lo} and {self.hi}"


@dataclass
class Verdict:
    tag: str
    status: Status
    interval: CountInterval | None = None
    witnesses: dict = field(default_factory=dict)
    note: str = ""

    @property
    def fired(self) -> bool:
        return self.status is Status.FIRED

    def to_json(self) -> dict:
        return {
            "tag": self.tag,
            "status": self.status.value,
            "interval": self.interval.to_json() if self.interval else None,
            "witnesses": self.witnesses,
            "note": self.note,
        }


@dataclass
class AnalysisOptions:
    cycle_budget: int = DEFAULT_CYCLE_BUDGET
    fp_budget: int = bn.DEFAULT_FP_BUDGET
    lfp_budget: int = DEFAULT_LFP_BUDGET
    solve: bool = False
    solve_cap: int = DEFAULT_SOLVE_CAP
    method: str = "fixedpoint-filter"


@dataclass
class AnalysisReport:
    atoms: tuple
    program_stats: dict
    graph_stats: dict
    tight: bool
    verdicts: list
    combined: CountInterval
    models: list | None = None
    method: str | None = None
    budget_exhausted: bool = False
    notes: list = field(default_factory=list)

    def verdict(self, tag: str) -> Verdict:
        return next(v for v in self.verdicts if v.tag == tag)

    def to_dict(self) -> dict:
        models = None
        if self.models is not None:
            models = {
                "method": self.method,
                "count": len(self.models),
                "models": [[self.atoms[i] for i in sorted(m)] for m in self.models],
            }
        return {
            "program": self.program_stats,
            "graph": self.graph_stats,
            "tight": self.tight,
            "verdicts": [v.to_json() for v in self.verdicts],
            "combined": self.combined.to_json(),
            "models": models,
            "budget_exhausted": self.budget_exhausted,
            "notes": list(self.notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def render(self) -> str:
        ps, gs = self.program_stats, self.graph_stats
        lines = [
            f"program: {ps['atoms']} atoms, {ps['rules']} rules, {ps['facts']} facts",
            f"dependence graph: {gs['positive_arcs']} positive arcs, {gs['negative_arcs']} negative arcs, "
            f"{gs['sccs']} SCCs, min in-degree {gs['min_in_degree']}",
            f"tight (stable = supported): {'yes' if self.tight else 'no'}",
            "verdicts:",
        ]
        width = max(len(t) for t in TAGS)
        for v in self.verdicts:
            line = f"  {v.tag:<{width}}  {v.status.value:<14}"
            if v.interval is not None:
                line += f" {v.interval}"
            if v.note:
                line += f"  ({v.note})"
            lines.append(line.rstrip())
            for key, val in v.witnesses.items():
                lines.append(f"    {key}: {_render_witness(val)}")
        lines.append(f"stable models: {self.combined.describe()} {self.combined}")
        if self.models is not None:
            shown = " ".join("{" + ",".join(self.atoms[i] for i in sorted(m)) + "}" for m in self.models)
            lines.append(f"models ({self.method}): {shown or 'none'}")
        lines.extend(f"note: {n}" for n in self.notes)
        return "\n".join(lines) + "\n"


def _render_witness(val) -> str:
    if isinstance(val, dict):
        vs, signs = val["vertices"], val["signs"]
        hops = "".join(f" -[{s}]-> {v}" for s, v in zip(signs, vs[1:]))
        kind = "positive" if val["sign"] == "+" else "negative"
        return f"{vs[0]}{hops} ({kind})"
    if isinstance(val, list) and val and isinstance(val[0], list):
        return " ".join("{" + ",".join(x) + "}" for x in val)
    if isinstance(val, list):
        return "{" + ",".join(str(x) for x in val) + "}"
    return str(val)


# -- witnesses as JSON-friendly values ---------------------------------------

def _cycle_json(G: SignedDigraph, w) -> dict:
    return {
        "vertices": [G.label(v) for v in w.vertices],
        "signs": [s.value for s in w.signs],
        "sign": w.sign.value,
    }


def _names(P: Program, atoms) -> list:
    return P.names_of(atoms)


# -- operations ----------------------------------------------------------------

def _complementary_preconditions(P: Program, G: SignedDigraph) -> None:
    if not G.arcs:
        raise Inapplicable("dependence graph has no arc")
    if len(strongly_connected_components(G)) != 1:
        raise Inapplicable("dependence graph is not strongly connected")
    if has_negative_cycle(G).yes:
        raise Inapplicable("dependence graph has a negative cycle")
    if not is_acyclic(positive_dependence_graph(P)):
        raise Inapplicable("positive dependence graph has a cycle")
    if P.facts():
        # A fact makes its head's function constant 1; the pair then breaks.
        raise Inapplicable("program has facts")


def construct_complementary_pair(P: Program) -> tuple:
    """Two complementary stable models read off the balance bipartition.

    Runs in polynomial time; both models are re-checked as stable before
    they are returned.
    """
    G = dependence_graph(P)
    _complementary_preconditions(P, G)
    A, B = balance_bipartition(G)
    if not (is_stable_model(P, A) and is_stable_model(P, B)):
        raise SoundnessError("bipartition classes are not both stable models")
    return A, B


def solve(
    P: Program,
    method: str = "fixedpoint-filter",
    *,
    fp_budget: int = bn.DEFAULT_FP_BUDGET,
    lfp_budget: int = DEFAULT_LFP_BUDGET,
) -> list:
    """All stable models of ``P``, sorted by bit-string."""
    if method == "fixedpoint-filter":
        candidates = bn.fixed_points(bn.encode(P), fp_budget)
        if is_acyclic(positive_dependence_graph(P)):
            return candidates
        return [s for s in candidates if is_stable_model(P, s)]
    if method == "lfp":
        return stable_via_lfp(P, lfp_budget, fp_budget)
    if method == "bruteforce":
        return bn.sort_states(oracle.enumerate_stable_bruteforce(P), P.n)
    raise ValueError(f"unknown method {method!r}")


def _graph_stats(G: SignedDigraph) -> dict:
    return {
        "vertices": len(G.vertices),
        "positive_arcs": len(G.arcs_of_sign(PLUS)),
        "negative_arcs": len(G.arcs_of_sign(MINUS)),
        "sccs": len(strongly_connected_components(G)),
        "min_in_degree": G.min_in_degree(),
    }


def analyze(P: Program, options: AnalysisOptions | None = None) -> AnalysisReport:
    opts = options or AnalysisOptions()
    G = dependence_graph(P)
    facts = P.facts()
    verdicts = []
    notes = []
    na = Status.NOT_APPLICABLE

    tight = is_acyclic(positive_dependence_graph(P))
    verdicts.append(Verdict("Fages", Status.FIRED if tight else na,
                            note="positive dependence graph acyclic" if tight else ""))

    if is_acyclic(G):
        verdicts.append(Verdict("Acyclic", Status.FIRED, CountInterval(1, 1)))
    else:
        verdicts.append(Verdict("Acyclic", na))

    single = is_single_cycle(G)
    pos_single = Verdict("SinglePosCycle", na)
    neg_single = Verdict("SingleNegCycle", na)
    if single is not None and facts:
        note = "dependence graph is a single cycle but the program has facts"
        (pos_single if single is PLUS else neg_single).note = note
    elif single is PLUS:
        if G.arcs_of_sign(MINUS):
            A, B = balance_bipartition(G)
            pos_single = Verdict("SinglePosCycle", Status.FIRED, CountInterval(2, 2),
                                 {"models": [_names(P, A), _names(P, B)]})
        else:
            pos_single = Verdict("SinglePosCycle", Status.FIRED, CountInterval(1, 1),
                                 {"models": [[]]}, note="all arcs positive")
    elif single is MINUS:
        neg_single = Verdict("SingleNegCycle", Status.FIRED, CountInterval(0, 0))
    verdicts += [pos_single, neg_single]

    pos = has_positive_cycle(G, opts.cycle_budget)
    # The empty program satisfies this vacuously yet has the stable model {}.
    fact_free_headed = P.n > 0 and not facts and P.heads() == frozenset(range(P.n))
    if pos.no:
        verdicts.append(Verdict("NoPosCycle", Status.FIRED, CountInterval(0, 1)))
        if fact_free_headed:
            verdicts.append(Verdict("NoPosCycleNoFact", Status.FIRED, CountInterval(0, 0)))
        else:
            why = "program has no atoms" if not P.n else "program has a fact or a headless atom"
            verdicts.append(Verdict("NoPosCycleNoFact", na, note=why))
    elif pos.yes:
        verdicts.append(Verdict("NoPosCycle", na, witnesses={"positive_cycle": _cycle_json(G, pos.witness)}))
        verdicts.append(Verdict("NoPosCycleNoFact", na))
    else:
        note = f"cycle enumeration budget {opts.cycle_budget} exhausted"
        verdicts.append(Verdict("NoPosCycle", Status.UNKNOWN, note=note))
        verdicts.append(Verdict("NoPosCycleNoFact", Status.UNKNOWN if fact_free_headed else na, note=note))

    pfvs = positive_feedback_vertex_set(G, opts.cycle_budget)
    verdicts.append(Verdict("PfvsBound", Status.FIRED, CountInterval(0, 2 ** len(pfvs)),
                            {"pfvs": _names(P, pfvs)}))

    neg = has_negative_cycle(G)
    if neg.no:
        verdicts.append(Verdict("NoNegCycle", Status.FIRED, CountInterval(1, None)))
    else:
        verdicts.append(Verdict("NoNegCycle", na, witnesses={"negative_cycle": _cycle_json(G, neg.witness)}))

    if is_locally_stratified(P):
        verdicts.append(Verdict("LocallyStratified", Status.FIRED, CountInterval(1, 1)))
    else:
        verdicts.append(Verdict("LocallyStratified", na))

    try:
        A, B = construct_complementary_pair(P)
    except Inapplicable as exc:
        verdicts.append(Verdict("ComplementaryPair", na, note=str(exc)))
    else:
        # Two complementary models are guaranteed; more can exist.
        verdicts.append(Verdict("ComplementaryPair", Status.FIRED, CountInterval(2, None),
                                {"models": [_names(P, A), _names(P, B)]}))

    combined = CountInterval(0, 2 ** P.n)
    for v in verdicts:
        if v.fired and v.interval is not None:
            combined = combined & v.interval

    report = AnalysisReport(
        atoms=P.atoms,
        program_stats={"atoms": P.n, "rules": len(P.rules), "facts": len(facts),
                       "atom_names": list(P.atoms)},
        graph_stats=_graph_stats(G),
        tight=tight,
        verdicts=verdicts,
        combined=combined,
        budget_exhausted=pos.unknown,
        notes=notes,
    )

    if opts.solve:
        if P.n > opts.solve_cap:
            notes.append(f"exact solving skipped: {P.n} atoms exceeds cap {opts.solve_cap}")
        else:
            try:
                models = solve(P, opts.method, fp_budget=opts.fp_budget, lfp_budget=opts.lfp_budget)
            except BudgetExceeded as exc:
                report.budget_exhausted = True
                notes.append(f"exact solving stopped: {exc}")
            else:
                if len(models) not in combined:
                    raise SoundnessError(
                        f"{len(models)} stable models found outside the combined interval {combined}"
                    )
                report.models = models
                report.method = opts.method
    return report
