"""Ground normal logic programs: syntax, parsing, printing and model checks.

Atoms are interned as dense integer ids in order of first textual
occurrence; rules and interpretations refer to atoms by id.  An
interpretation is a ``frozenset`` of atom ids (the set of true atoms).
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

__all__ = [
    "ParseError",
    "Rule",
    "Program",
    "parse_program",
    "format_program",
    "reduct",
    "least_model",
    "is_stable_model",
    "is_supported_model",
    "is_herbrand_model",
]

Interpretation = frozenset  # frozenset[int]

class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Rule:
    head: int
    pbody: frozenset = frozenset()
    nbody: frozenset = frozenset()

    @property
    def body(self) -> frozenset:
        return self.pbody | self.nbody

    @property
    def is_fact(self) -> bool:
        return not self.pbody and not self.nbody

    def body_holds(self, interp) -> bool:
        return self.pbody <= interp and not (self.nbody & interp)


@dataclass(frozen=True)
class Program:
    """A finite set of ground rules over an atom table.

    ``atoms`` holds atom names indexed by id.  It may contain atoms that no
    rule mentions (useful for programs derived from another program, such
    as its least fixpoint), but every atom a rule mentions must be in it.
    """

    atoms: tuple = ()
    rules: tuple = ()
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        n = len(self.atoms)
        if len(set(self.atoms)) != n:
            raise ValueError("duplicate atom names")
        seen = dict.fromkeys(self.rules)
        for r in seen:
            if not 0 <= r.head < n or any(not 0 <= a < n for a in r.body):
                raise ValueError(f"rule {r} refers to an atom outside the table")
        object.__setattr__(self, "rules", tuple(seen))
        object.__setattr__(self, "_index", {name: i for i, name in enumerate(self.atoms)})

    @classmethod
    def from_rules(cls, rules: Iterable[tuple], atoms: Iterable[str] = ()) -> "Program":
        """Build from ``(head, [pos...], [neg...])`` name triples.

        ``atoms`` fixes an initial prefix of the atom order; further atoms
        are interned on first occurrence.
        """
        table = {name: i for i, name in enumerate(atoms)}

        def intern(name):
            if name not in table:
                table[name] = len(table)
            return table[name]

        built = []
        for head, pos, neg in rules:
            h = intern(head)
            p = frozenset(intern(a) for a in pos)
            q = frozenset(intern(a) for a in neg)
            built.append(Rule(h, p, q))
        return cls(tuple(table), tuple(built))

    @property
    def n(self) -> int:
        return len(self.atoms)

    def atom_id(self, name: str) -> int:
        return self._index[name]

    def interp(self, *names: str) -> frozenset:
        return frozenset(self._index[a] for a in names)

    def names_of(self, interp) -> list:
        return [self.atoms[i] for i in sorted(interp)]

    def format_set(self, interp) -> str:
        return "{" + ",".join(self.names_of(interp)) + "}"

    def facts(self) -> list:
        return [r for r in self.rules if r.is_fact]

    def heads(self) -> frozenset:
        return frozenset(r.head for r in self.rules)

    def rules_by_head(self) -> dict:
        by_head: dict = {}
        for r in self.rules:
            by_head.setdefault(r.head, []).append(r)
        return by_head

    def is_positive(self) -> bool:
        return all(not r.nbody for r in self.rules)

    def format_rule(self, r: Rule) -> str:
        return _format_rule(self.atoms, r)

    def __str__(self) -> str:
        return format_program(self)


# -- parsing -----------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)|(?P<comment>%[^\n]*)|(?P<arrow>:-)|(?P<dot>\.)|(?P<comma>,)"
    r"|(?P<ident>[a-zA-Z_][a-zA-Z0-9_]*)"
)


def _tokenize(text: str):
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            yield kind, m.group(), line, pos - line_start + 1
        chunk = m.group()
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = m.start() + chunk.rfind("\n") + 1
        pos = m.end()
    yield "eof", "", line, pos - line_start + 1


def parse_program(text: str) -> Program:
    """Parse ``head :- lit, ..., lit.`` rules, ``not`` marking default negation.

    >>> P = parse_program("a :- b. a :- not b. b :- c. c :- b.")
    >>> P.atoms, len(P.rules)
    (('a', 'b', 'c'), 4)
    """
    tokens = _tokenize(text)
    table: dict = {}
    rules = []

    def intern(name):
        if name not in table:
            table[name] = len(table)
        return table[name]

    tok = next(tokens)

    def expect(kind, what):
        nonlocal tok
        if tok[0] != kind:
            found = tok[1] or "end of input"
            raise ParseError(f"expected {what}, found {found!r}", tok[2], tok[3])
        current = tok
        tok = next(tokens)
        return current

    while tok[0] != "eof":
        _, head, line, col = expect("ident", "atom")
        if head == "not" and tok[0] == "ident":
            raise ParseError("rule head cannot be negated", line, col)
        h = intern(head)
        pos, neg = set(), set()
        if tok[0] == "arrow":
            tok = next(tokens)
            while True:
                name = expect("ident", "literal")[1]
                if name == "not" and tok[0] == "ident":
                    neg.add(intern(expect("ident", "atom")[1]))
                else:
                    pos.add(intern(name))
                if tok[0] != "comma":
                    break
                tok = next(tokens)
        expect("dot", "'.'")
        rules.append(Rule(h, frozenset(pos), frozenset(neg)))
    return Program(tuple(table), tuple(rules))


def _format_rule(atoms, r: Rule) -> str:
    # Body literals in atom-id order keeps first-occurrence interning stable
    # under a print/parse round trip.
    lits = [(a, 0) for a in r.pbody] + [(a, 1) for a in r.nbody]
    lits.sort()
    body = ", ".join(("not " if neg else "") + atoms[a] for a, neg in lits)
    if not body:
        return f"{atoms[r.head]}."
    return f"{atoms[r.head]} :- {body}."


def format_program(P: Program) -> str:
    return "".join(_format_rule(P.atoms, r) + "\n" for r in P.rules)


# -- semantics ---------------------------------------------------------------

def reduct(P: Program, interp) -> Program:
    """Gelfond-Lifschitz reduct: drop rules blocked by ``interp``, strip ``not``."""
    kept = [Rule(r.head, r.pbody) for r in P.rules if not (r.nbody & interp)]
    return Program(P.atoms, tuple(kept))


def _forward_chain(rules, n: int) -> frozenset:
    # Counter-based propagation: each rule fires once, when its last
    # positive body atom is derived.  Linear in total rule size.
    waiting = [0] * len(rules)
    watchers: list = [[] for _ in range(n)]
    derived = [False] * n
    queue = deque()
    for i, r in enumerate(rules):
        waiting[i] = len(r.pbody)
        for a in r.pbody:
            watchers[a].append(i)
        if not r.pbody and not derived[r.head]:
            derived[r.head] = True
            queue.append(r.head)
    while queue:
        a = queue.popleft()
        for i in watchers[a]:
            waiting[i] -= 1
            if waiting[i] == 0:
                h = rules[i].head
                if not derived[h]:
                    derived[h] = True
                    queue.append(h)
    return frozenset(i for i in range(n) if derived[i])


def least_model(Q: Program) -> frozenset:
    """Least Herbrand model of a positive program."""
    if not Q.is_positive():
        raise ValueError("least_model expects a positive program")
    return _forward_chain(Q.rules, Q.n)


def is_stable_model(P: Program, interp) -> bool:
    interp = frozenset(interp)
    # The reduct is built implicitly so the check stays linear.
    kept = [r for r in P.rules if not (r.nbody & interp)]
    return _forward_chain(kept, P.n) == interp


def is_herbrand_model(P: Program, interp) -> bool:
    return all(r.head in interp for r in P.rules if r.body_holds(interp))


def is_supported_model(P: Program, interp) -> bool:
    interp = frozenset(interp)
    if not is_herbrand_model(P, interp):
        return False
    supported = {r.head for r in P.rules if r.body_holds(interp)}
    return interp <= supported
