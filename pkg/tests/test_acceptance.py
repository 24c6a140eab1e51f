"""Acceptance criteria, one test each, with their time limits.

Run ``pytest tests/test_acceptance.py`` for a PASS/FAIL line per criterion
in the terminal summary, or ``python tests/test_acceptance.py`` directly.
"""

import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import EX1, EX2_P1, EX2_P2, EX3, graph  # noqa: E402
from generators import (  # noqa: E402
    balanced_program,
    random_program,
    random_signed_digraph,
    sparse_headed_program,
    stratified_program,
)

from lpbn.analyzer import METHODS, CountInterval, Status, analyze, construct_complementary_pair, solve  # noqa: E402
from lpbn.bn import encode, fixed_points, influence_graph, state_bits  # noqa: E402
from lpbn.fixpoint import least_fixpoint, lfp_program, stable_via_lfp  # noqa: E402
from lpbn.oracle import (  # noqa: E402
    enumerate_fixed_points_bruteforce,
    enumerate_signed_cycles,
    enumerate_stable_bruteforce,
    enumerate_supported_bruteforce,
)
from lpbn.program import parse_program  # noqa: E402
from lpbn.sgraph import (  # noqa: E402
    MINUS,
    PLUS,
    dependence_graph,
    has_negative_cycle,
    has_positive_cycle,
    is_acyclic,
    is_locally_stratified,
    positive_dependence_graph,
)

CORPUS_SIZE = 500
CLASS_SIZE = 100
GRAPH_COUNT = 300

# criterion number -> (description, outcome line); filled as tests run
RESULTS: dict = {}


def corpus():
    rng = random.Random(20240601)
    return [random_program(rng, max_atoms=9, max_rules=14) for _ in range(CORPUS_SIZE)]


def named(P, models):
    return {frozenset(P.names_of(m)) for m in models}


def timed(number, title, limit):
    """Decorator: run the check, enforce ``limit`` seconds, record the outcome."""
    def wrap(check):
        def test():
            start = time.perf_counter()
            try:
                check()
                elapsed = time.perf_counter() - start
                assert limit is None or elapsed < limit, f"took {elapsed:.2f} s, limit {limit} s"
            except BaseException as exc:
                elapsed = time.perf_counter() - start
                RESULTS[number] = f"FAIL  criterion {number}: {title} ({elapsed:.2f} s): {exc}".splitlines()[0]
                raise
            RESULTS[number] = f"PASS  criterion {number}: {title} ({elapsed:.2f} s)"
        test.__name__ = check.__name__
        test.__doc__ = check.__doc__
        return test
    return wrap


@timed(1, "dual-support program", 1.0)
def test_criterion_1_dual_support_example():
    P = parse_program(EX1)
    f = encode(P)
    assert f.format() == "f_a = b | !b\nf_b = c\nf_c = b"
    assert [state_bits(s, 3) for s in fixed_points(f)] == ["100", "111"]
    assert named(P, solve(P)) == {frozenset("a")}
    ig = influence_graph(f, "semantic")
    assert {(ig.label(u), ig.label(v), s) for u, v, s in ig.arcs} == {("c", "b", PLUS), ("b", "c", PLUS)}
    assert ig.arcs < dependence_graph(P).arcs


@timed(2, "single-cycle programs", 1.0)
def test_criterion_2_single_cycle_examples():
    P1, P2 = parse_program(EX2_P1), parse_program(EX2_P2)
    models = solve(P1)
    assert named(P1, models) == {frozenset("ac"), frozenset("b")}
    A, B = models
    assert not A & B and A | B == frozenset(range(P1.n))
    assert solve(P2) == []
    r1, r2 = analyze(P1), analyze(P2)
    v1, v2 = r1.verdict("SinglePosCycle"), r2.verdict("SingleNegCycle")
    assert v1.status is Status.FIRED and v1.interval == CountInterval(2, 2)
    assert v2.status is Status.FIRED and v2.interval == CountInterval(0, 0)
    assert r1.combined == CountInterval(2, 2) and r2.combined == CountInterval(0, 0)


@timed(3, "complementary-pair program", 1.0)
def test_criterion_3_complementary_pair_example():
    P = parse_program(EX3)
    assert named(P, solve(P)) == {frozenset("b"), frozenset("ac")}
    assert {frozenset(P.names_of(m)) for m in construct_complementary_pair(P)} == {frozenset("b"), frozenset("ac")}
    assert analyze(P).tight and is_acyclic(positive_dependence_graph(P))
    assert fixed_points(encode(P)) == enumerate_stable_bruteforce(P)


@timed(4, "oracle equivalence on 500 random programs", 60.0)
def test_criterion_4_oracle_equivalence():
    for i, P in enumerate(corpus()):
        supported = enumerate_supported_bruteforce(P)
        assert supported == enumerate_fixed_points_bruteforce(encode(P)) == fixed_points(encode(P)), i
        stable = enumerate_stable_bruteforce(P)
        assert set(stable) <= set(supported), i
        assert all(solve(P, m) == stable for m in METHODS), i
        assert len(stable) in analyze(P).combined, i


def _collect(make, keep, seed, want=CLASS_SIZE, attempts=20_000):
    rng = random.Random(seed)
    found = []
    for _ in range(attempts):
        P = make(rng)
        if keep(P):
            found.append(P)
            if len(found) == want:
                return found
    raise AssertionError(f"only {len(found)} programs in class after {attempts} draws")


def _count(P):
    return len(enumerate_stable_bruteforce(P))


@timed(5, "graph-class count bounds", 120.0)
def test_criterion_5_graph_class_bounds():
    no_neg = _collect(balanced_program, lambda P: has_negative_cycle(dependence_graph(P)).no, 1)
    no_neg += _collect(random_program, lambda P: has_negative_cycle(dependence_graph(P)).no, 2)
    assert all(_count(P) >= 1 for P in no_neg)

    def no_pos(P):
        return has_positive_cycle(dependence_graph(P)).no

    assert all(_count(P) <= 1 for P in _collect(random_program, no_pos, 3))

    def no_pos_no_fact(P):
        return no_pos(P) and not P.facts() and P.heads() == frozenset(range(P.n))

    assert all(_count(P) == 0 for P in _collect(sparse_headed_program, no_pos_no_fact, 4))

    for P in _collect(stratified_program, is_locally_stratified, 5):
        assert _count(P) == 1
        assert is_acyclic(dependence_graph(lfp_program(P, least_fixpoint(P))))

    for P in _collect(random_program, lambda P: True, 6):
        pfvs = analyze(P).verdict("PfvsBound").witnesses["pfvs"]
        assert _count(P) <= 2 ** len(pfvs)


def _parity_matches(G):
    cycles = enumerate_signed_cycles(G)
    neg, pos = has_negative_cycle(G), has_positive_cycle(G)
    assert not pos.unknown
    assert neg.yes == any(c.sign is MINUS for c in cycles)
    assert pos.yes == any(c.sign is PLUS for c in cycles)


@timed(6, "signed-cycle detection against enumeration", 30.0)
def test_criterion_6_graph_oracle():
    rng = random.Random(99)
    for _ in range(GRAPH_COUNT):
        _parity_matches(random_signed_digraph(rng, max_vertices=8))
    bowtie = graph(5, (0, 1, "-"), (1, 2, "+"), (2, 0, "+"), (0, 3, "+"), (3, 4, "-"), (4, 0, "+"))
    _parity_matches(bowtie)
    assert has_positive_cycle(bowtie).no and has_negative_cycle(bowtie).yes


@timed(7, "least-fixpoint solving and negative-cycle preservation", None)
def test_criterion_7_lfp_suite():
    programs = corpus()
    for i, P in enumerate(programs):
        assert stable_via_lfp(P) == enumerate_stable_bruteforce(P), i
    subset = [P for P in programs if has_negative_cycle(dependence_graph(P)).no]
    assert subset
    for P in subset:
        assert has_negative_cycle(dependence_graph(lfp_program(P, least_fixpoint(P)))).no


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    for t in tests:
        try:
            t()
        except BaseException:
            pass
    print("\n".join(RESULTS[k] for k in sorted(RESULTS)))
    sys.exit(0 if all(r.startswith("PASS") for r in RESULTS.values()) else 1)
