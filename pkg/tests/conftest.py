import sys

import pytest

from lpbn.program import parse_program
from lpbn.sgraph import MINUS, PLUS, SignedDigraph

EX1 = "a :- b. a :- not b. b :- c. c :- b."
EX2_P1 = "a :- not b. b :- not c. c :- a."
EX2_P2 = "a :- b. b :- not c. c :- a."
EX3 = "a :- not b. b :- not a. b :- not c. c :- not b."


@pytest.fixture
def ex1():
    return parse_program(EX1)


@pytest.fixture
def ex2_p1():
    return parse_program(EX2_P1)


@pytest.fixture
def ex2_p2():
    return parse_program(EX2_P2)


@pytest.fixture
def ex3():
    return parse_program(EX3)


def graph(n, *arcs):
    """Signed digraph on ``range(n)`` from ``(u, v, '+'|'-')`` triples."""
    sign = {"+": PLUS, "-": MINUS}
    return SignedDigraph(tuple(range(n)), frozenset((u, v, sign[s]) for u, v, s in arcs))


@pytest.fixture
def bowtie():
    # Two negative triangles sharing vertex 0: a positive closed walk
    # through both exists, but no positive simple cycle.
    return graph(5, (0, 1, "-"), (1, 2, "+"), (2, 0, "+"), (0, 3, "+"), (3, 4, "-"), (4, 0, "+"))


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance and acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for key in sorted(acceptance.RESULTS):
            terminalreporter.write_line(acceptance.RESULTS[key])
