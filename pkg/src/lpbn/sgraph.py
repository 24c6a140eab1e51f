"""Signed directed graphs and the cycle-sign structure over them.

Vertices are atom ids.  Arcs are ``(source, target, Sign)`` triples;
opposite-sign parallel arcs and self-loops are allowed.  A cycle is
positive when it has an even number of negative arcs.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from functools import cached_property

from .errors import Inapplicable
from .program import Program

__all__ = [
    "Sign",
    "Answer",
    "Tri",
    "CycleWitness",
    "SignedDigraph",
    "DEFAULT_CYCLE_BUDGET",
    "dependence_graph",
    "positive_dependence_graph",
    "strongly_connected_components",
    "is_acyclic",
    "find_cycle",
    "simple_cycles",
    "has_negative_cycle",
    "has_positive_cycle",
    "is_sign_definite",
    "is_locally_stratified",
    "positive_feedback_vertex_set",
    "balance_bipartition",
    "is_single_cycle",
    "to_dot",
]

DEFAULT_CYCLE_BUDGET = 10**6


class Sign(enum.Enum):
    PLUS = "+"
    MINUS = "-"

    def __mul__(self, other: "Sign") -> "Sign":
        return Sign.PLUS if self is other else Sign.MINUS

    def flip(self) -> "Sign":
        return Sign.MINUS if self is Sign.PLUS else Sign.PLUS

    @classmethod
    def product(cls, signs) -> "Sign":
        minus = sum(1 for s in signs if s is Sign.MINUS)
        return cls.MINUS if minus % 2 else cls.PLUS


PLUS, MINUS = Sign.PLUS, Sign.MINUS


@dataclass(frozen=True)
class CycleWitness:
    """A simple cycle ``v0 -> v1 -> ... -> v0`` with the sign of each arc."""

    vertices: tuple
    signs: tuple

    @property
    def sign(self) -> Sign:
        return Sign.product(self.signs)

    @property
    def length(self) -> int:
        return len(self.signs)

    def arcs(self):
        return [(self.vertices[i], self.vertices[i + 1], s) for i, s in enumerate(self.signs)]

    def is_valid_in(self, G: "SignedDigraph") -> bool:
        vs = self.vertices
        if len(vs) < 2 or vs[0] != vs[-1] or len(self.signs) != len(vs) - 1:
            return False
        if len(set(vs[:-1])) != len(vs) - 1:
            return False
        return all(arc in G.arcs for arc in self.arcs())


class Answer(enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Tri:
    answer: Answer
    witness: CycleWitness | None = None

    @property
    def yes(self) -> bool:
        return self.answer is Answer.YES

    @property
    def no(self) -> bool:
        return self.answer is Answer.NO

    @property
    def unknown(self) -> bool:
        return self.answer is Answer.UNKNOWN


NO = Tri(Answer.NO)
UNKNOWN = Tri(Answer.UNKNOWN)


@dataclass(frozen=True)
class SignedDigraph:
    vertices: tuple = ()
    arcs: frozenset = frozenset()
    names: tuple | None = None

    def __post_init__(self):
        vs = tuple(sorted(set(self.vertices)))
        object.__setattr__(self, "vertices", vs)
        arcs = frozenset(self.arcs)
        vset = set(vs)
        for u, v, s in arcs:
            if u not in vset or v not in vset or not isinstance(s, Sign):
                raise ValueError(f"bad arc {(u, v, s)}")
        object.__setattr__(self, "arcs", arcs)

    @cached_property
    def succ(self) -> dict:
        """``succ[u][v]`` is the frozenset of signs on arcs ``u -> v``."""
        out: dict = {v: {} for v in self.vertices}
        for u, v, s in self.arcs:
            out[u].setdefault(v, set()).add(s)
        return {u: {v: frozenset(ss) for v, ss in sorted(d.items())} for u, d in out.items()}

    @cached_property
    def pred(self) -> dict:
        out: dict = {v: {} for v in self.vertices}
        for u, v, s in self.arcs:
            out[v].setdefault(u, set()).add(s)
        return {v: {u: frozenset(ss) for u, ss in sorted(d.items())} for v, d in out.items()}

    def label(self, v) -> str:
        return self.names[v] if self.names is not None else str(v)

    def sorted_arcs(self) -> list:
        return sorted(self.arcs, key=lambda a: (a[0], a[1], a[2] is MINUS))

    def arcs_of_sign(self, sign: Sign) -> frozenset:
        return frozenset(a for a in self.arcs if a[2] is sign)

    def subgraph(self, keep) -> "SignedDigraph":
        keep = set(keep)
        arcs = frozenset(a for a in self.arcs if a[0] in keep and a[1] in keep)
        return SignedDigraph(tuple(keep), arcs, self.names)

    def without(self, removed) -> "SignedDigraph":
        removed = set(removed)
        return self.subgraph(v for v in self.vertices if v not in removed)

    def degree(self, v) -> int:
        return sum(len(ss) for ss in self.succ[v].values()) + sum(
            len(ss) for ss in self.pred[v].values()
        )

    def in_degree(self, v) -> int:
        """Number of distinct vertices with an arc into ``v``."""
        return len(self.pred[v])

    def min_in_degree(self) -> int:
        return min((self.in_degree(v) for v in self.vertices), default=0)

    def is_subgraph_of(self, other: "SignedDigraph") -> bool:
        return set(self.vertices) <= set(other.vertices) and self.arcs <= other.arcs


# -- construction ------------------------------------------------------------

def dependence_graph(P: Program) -> SignedDigraph:
    arcs = set()
    for r in P.rules:
        arcs.update((u, r.head, PLUS) for u in r.pbody)
        arcs.update((u, r.head, MINUS) for u in r.nbody)
    return SignedDigraph(tuple(range(P.n)), frozenset(arcs), P.atoms)


def positive_dependence_graph(P: Program) -> SignedDigraph:
    G = dependence_graph(P)
    return SignedDigraph(G.vertices, G.arcs_of_sign(PLUS), G.names)


# -- components and plain cycles ---------------------------------------------

def _tarjan(vertices, succ) -> list:
    index: dict = {}
    low: dict = {}
    on_stack = set()
    stack: list = []
    out: list = []
    counter = 0
    for root in vertices:
        if root in index:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        work = [(root, iter(succ[root]))]
        while work:
            v, it = work[-1]
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ[w])))
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            else:
                work.pop()
                if work:
                    u = work[-1][0]
                    low[u] = min(low[u], low[v])
                if low[v] == index[v]:
                    comp = set()
                    while True:
                        w = stack.pop()
                        on_stack.discard(w)
                        comp.add(w)
                        if w == v:
                            break
                    out.append(frozenset(comp))
    return out


def strongly_connected_components(G: SignedDigraph) -> list:
    """SCCs as frozensets, sinks of the condensation first."""
    return _tarjan(G.vertices, G.succ)


def _nontrivial(G: SignedDigraph, comp) -> bool:
    if len(comp) > 1:
        return True
    (v,) = comp
    return v in G.succ[v]


def is_acyclic(G: SignedDigraph) -> bool:
    return not any(_nontrivial(G, c) for c in strongly_connected_components(G))


def _bfs_path(G: SignedDigraph, src, dst, allowed=None):
    """Shortest vertex path src -> dst (src != dst) inside ``allowed``."""
    parent = {src: None}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        for w in G.succ[u]:
            if w in parent or (allowed is not None and w not in allowed):
                continue
            parent[w] = u
            if w == dst:
                path = [w]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])
                return path[::-1]
            queue.append(w)
    return None


def _witness(G: SignedDigraph, verts, want: Sign | None = None) -> CycleWitness:
    """Pick arc signs along a vertex cycle, hitting ``want`` when possible."""
    signs = [min(G.succ[verts[i]][verts[i + 1]], key=lambda s: s is MINUS) for i in range(len(verts) - 1)]
    if want is not None and Sign.product(signs) is not want:
        for i in range(len(signs)):
            if len(G.succ[verts[i]][verts[i + 1]]) == 2:
                signs[i] = signs[i].flip()
                break
    return CycleWitness(tuple(verts), tuple(signs))


def find_cycle(G: SignedDigraph) -> CycleWitness | None:
    """Some simple cycle of ``G``, or None when ``G`` is acyclic."""
    for v in G.vertices:
        if v in G.succ[v]:
            return _witness(G, [v, v])
    for comp in strongly_connected_components(G):
        if len(comp) > 1:
            v = min(comp)
            w = next(iter(x for x in G.succ[v] if x in comp))
            path = _bfs_path(G, w, v, comp)
            return _witness(G, [v] + path)
    return None


def simple_cycles(G: SignedDigraph):
    """Yield every simple cycle as a closed vertex list (Johnson's algorithm).

    Parallel arcs are not expanded; self-loops come first.
    """
    for v in G.vertices:
        if v in G.succ[v]:
            yield [v, v]
    adj = {v: [w for w in G.succ[v] if w != v] for v in G.vertices}
    pending = [c for c in _tarjan(G.vertices, adj) if len(c) > 1]
    while pending:
        comp = pending.pop()
        start = min(comp)
        sub = {v: [w for w in adj[v] if w in comp] for v in comp}
        yield from _circuits_from(start, sub)
        rest = comp - {start}
        sub_rest = {v: [w for w in adj[v] if w in rest] for v in sorted(rest)}
        pending.extend(c for c in _tarjan(sorted(rest), sub_rest) if len(c) > 1)


def _circuits_from(start, sub):
    path = [start]
    blocked = {start}
    closed: set = set()
    B: dict = {}
    stack = [(start, list(sub[start]))]
    while stack:
        node, nbrs = stack[-1]
        if nbrs:
            nxt = nbrs.pop()
            if nxt == start:
                yield path + [start]
                closed.update(path)
            elif nxt not in blocked:
                path.append(nxt)
                stack.append((nxt, list(sub[nxt])))
                closed.discard(nxt)
                blocked.add(nxt)
                continue
        if not nbrs:
            if node in closed:
                todo = {node}
                while todo:
                    x = todo.pop()
                    if x in blocked:
                        blocked.discard(x)
                        todo.update(B.pop(x, ()))
            else:
                for w in sub[node]:
                    B.setdefault(w, set()).add(node)
            stack.pop()
            path.pop()


# -- signed cycles -----------------------------------------------------------

def _split_closed_walk(verts, signs) -> list:
    """Cut a closed walk into simple cycles whose sign product is the walk's."""
    stack_v = [verts[0]]
    stack_s: list = []
    pos = {verts[0]: 0}
    pieces = []
    for i, s in enumerate(signs):
        w = verts[i + 1]
        if w in pos:
            j = pos[w]
            pieces.append(CycleWitness(tuple(stack_v[j:]) + (w,), tuple(stack_s[j:]) + (s,)))
            for x in stack_v[j + 1 :]:
                del pos[x]
            del stack_v[j + 1 :]
            del stack_s[j:]
        else:
            pos[w] = len(stack_v)
            stack_v.append(w)
            stack_s.append(s)
    return pieces


def has_negative_cycle(G: SignedDigraph) -> Tri:
    """Exact test via the parity-doubled graph; never unknown."""
    nodes = [(v, p) for v in G.vertices for p in (0, 1)]
    succ: dict = {n: [] for n in nodes}
    for u, v, s in G.sorted_arcs():
        flip = 1 if s is MINUS else 0
        succ[(u, 0)].append(((v, flip), s))
        succ[(u, 1)].append(((v, 1 - flip), s))
    plain = {n: [w for w, _ in out] for n, out in succ.items()}
    comp_of = {}
    for comp in _tarjan(nodes, plain):
        for n in comp:
            comp_of[n] = comp
    for v in G.vertices:
        if comp_of[(v, 0)] is not comp_of[(v, 1)]:
            continue
        # BFS (v,0) -> (v,1) gives a closed walk at v with odd minus-parity.
        parent = {(v, 0): None}
        queue = deque([(v, 0)])
        while (v, 1) not in parent:
            n = queue.popleft()
            for w, s in succ[n]:
                if w not in parent:
                    parent[w] = (n, s)
                    queue.append(w)
        verts, signs = [v], []
        n = (v, 1)
        while parent[n] is not None:
            prev, s = parent[n]
            verts.append(prev[0])
            signs.append(s)
            n = prev
        verts.reverse()
        signs.reverse()
        for piece in _split_closed_walk(verts, signs):
            if piece.sign is MINUS:
                return Tri(Answer.YES, piece)
        raise AssertionError("odd closed walk without a negative simple cycle")
    return NO


def _non_definite_pair(G: SignedDigraph, within=None):
    for u in G.vertices:
        if within is not None and u not in within:
            continue
        for v, ss in G.succ[u].items():
            if u != v and len(ss) == 2 and (within is None or v in within):
                return u, v
    return None


def has_positive_cycle(G: SignedDigraph, budget: int = DEFAULT_CYCLE_BUDGET) -> Tri:
    """Decide whether ``G`` has a simple positive cycle.

    Cheap exact checks run first: acyclicity, a positive self-loop, an SCC
    that is not sign-definite (it then carries cycles of both signs), and
    an SCC free of negative cycles (every cycle in it is positive).  What
    is left is settled by enumerating simple cycles; ``budget`` caps how
    many are examined before answering UNKNOWN.
    """
    if budget <= 0:
        raise ValueError("budget must be positive")
    if is_acyclic(G):
        return NO
    for v in G.vertices:
        if PLUS in G.succ[v].get(v, ()):
            return Tri(Answer.YES, CycleWitness((v, v), (PLUS,)))
    comps = [c for c in strongly_connected_components(G) if len(c) > 1]
    for comp in comps:
        pair = _non_definite_pair(G, comp)
        if pair is not None:
            u, v = pair
            path = _bfs_path(G, v, u, comp)
            return Tri(Answer.YES, _witness(G, [u] + path, PLUS))
        sub = G.subgraph(comp)
        if has_negative_cycle(sub).no:
            return Tri(Answer.YES, find_cycle(sub))
    seen = 0
    for comp in comps:
        sub = G.subgraph(comp)
        for verts in simple_cycles(sub):
            if len(verts) == 2:
                continue  # negative self-loop; positive ones handled above
            seen += 1
            if seen > budget:
                return UNKNOWN
            w = _witness(sub, verts, PLUS)
            if w.sign is PLUS:
                return Tri(Answer.YES, w)
    return NO


def is_sign_definite(G: SignedDigraph) -> bool:
    return _non_definite_pair(G) is None


def is_locally_stratified(P: Program) -> bool:
    """No negative arc of the dependence graph lies on a cycle."""
    G = dependence_graph(P)
    comp_of = {}
    for comp in strongly_connected_components(G):
        for v in comp:
            comp_of[v] = comp
    # For an arc u -> v, v reaches u iff both share an SCC.
    return all(comp_of[u] is not comp_of[v] for u, v, s in G.arcs if s is MINUS)


def positive_feedback_vertex_set(G: SignedDigraph, budget: int = DEFAULT_CYCLE_BUDGET) -> frozenset:
    """Greedy vertex set meeting every positive cycle (sound, not minimum)."""
    removed: set = set()
    H = G
    while True:
        res = has_positive_cycle(H, budget)
        if res.no:
            return frozenset(removed)
        if res.unknown:
            break
        cycle_vs = set(res.witness.vertices)
        removed.add(max(cycle_vs, key=lambda x: (H.degree(x), -x)))
        H = G.without(removed)
    # Detection gave up: make G - U fully acyclic instead.
    while True:
        cyc = find_cycle(H)
        if cyc is None:
            return frozenset(removed)
        removed.add(max(set(cyc.vertices), key=lambda x: (H.degree(x), -x)))
        H = G.without(removed)


def balance_bipartition(G: SignedDigraph) -> tuple:
    """Split a balanced strongly connected graph into ``(S_plus, S_minus)``.

    Positive arcs stay inside a class, negative arcs cross.  The class
    holding the smallest vertex is returned first.
    """
    if not G.arcs:
        raise Inapplicable("graph has no arc")
    comps = strongly_connected_components(G)
    if len(comps) != 1:
        raise Inapplicable("graph is not strongly connected")
    neg = has_negative_cycle(G)
    if neg.yes:
        raise Inapplicable("graph has a negative cycle")
    start = G.vertices[0]
    color = {start: 0}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        nbrs = [(v, s) for v, ss in G.succ[u].items() for s in ss]
        nbrs += [(v, s) for v, ss in G.pred[u].items() for s in ss]
        for v, s in nbrs:
            c = color[u] ^ (1 if s is MINUS else 0)
            if v not in color:
                color[v] = c
                queue.append(v)
            elif color[v] != c:
                raise AssertionError("inconsistent colouring in a balanced graph")
    plus = frozenset(v for v, c in color.items() if c == 0)
    minus = frozenset(v for v, c in color.items() if c == 1)
    return plus, minus


def is_single_cycle(G: SignedDigraph) -> Sign | None:
    """The cycle's sign if ``G`` is exactly one simple cycle through all vertices."""
    if not G.vertices:
        return None
    out_deg = {v: 0 for v in G.vertices}
    in_deg = {v: 0 for v in G.vertices}
    for u, v, _ in G.arcs:
        out_deg[u] += 1
        in_deg[v] += 1
    if any(d != 1 for d in out_deg.values()) or any(d != 1 for d in in_deg.values()):
        return None
    if len(strongly_connected_components(G)) != 1:
        return None
    return Sign.product(s for _, _, s in G.arcs)


def to_dot(G: SignedDigraph, name: str = "G", comment: str | None = None) -> str:
    """Graphviz text: positive arcs solid, negative arcs dashed and labelled "-"."""
    lines = [f"digraph {name} {{"]
    if comment:
        lines.append(f"  // {comment}")
    for v in G.vertices:
        lines.append(f'  "{G.label(v)}";')
    for u, v, s in G.sorted_arcs():
        attrs = "" if s is PLUS else ' [style=dashed, label="-"]'
        lines.append(f'  "{G.label(u)}" -> "{G.label(v)}"{attrs};')
    lines.append("}")
    return "\n".join(lines) + "\n"
