import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from sepgraph.core import SignedEdge
from sepgraph.generators import random_separated_graph
from sepgraph.prime import (NotApplicable, NotPrime, Prime, V_of, admissibly_connected, boundary_ball,
                            boundary_closure, can_be_linked, dead_ends, is_cantor, is_path_closed, is_prime,
                            linking_relation, maximal_unlinkable_pairs)
from sepgraph.samples import sample, sample_names
from sepgraph.wordshift import lamplighter_graph

from conftest import graphs


def letters(text):
    return frozenset(SignedEdge.parse(t) for t in text.split())


@pytest.fixture(scope="module")
def ex2():
    return sample("ex9-2")


@pytest.fixture(scope="module")
def ex3():
    return sample("ex9-3")


def test_dead_ends(e23, ex2):
    assert dead_ends(e23) == frozenset()
    assert dead_ends(ex2) == letters("y3~")
    g = sample("two-cycle")
    assert dead_ends(g) == frozenset(g.signed_edges())


@settings(max_examples=80, deadline=None)
@given(graphs())
def test_dead_ends_are_path_closed(g):
    assert is_path_closed(g, dead_ends(g))


def test_boundary_closure_examples(ex2):
    assert boundary_closure(ex2, letters("y3~")) == letters("x1 x2 y1~ y2~ y3~")
    assert boundary_closure(ex2, ()) == frozenset()


@settings(max_examples=150, deadline=None)
@given(graphs(), st.integers(0, 2**32 - 1))
def test_boundary_closure_laws(g, seed):
    rng = random.Random(seed)
    sig = list(g.signed_edges())
    A = frozenset(rng.sample(sig, rng.randint(0, len(sig))))
    B = A | frozenset(rng.sample(sig, rng.randint(0, len(sig))))
    cA = boundary_closure(g, A)
    assert A <= cA <= boundary_closure(g, B)
    assert boundary_closure(g, cA) == cA
    assert is_path_closed(g, cA)


def test_V_of_examples(ex2):
    assert V_of(ex2, dead_ends(ex2)) == frozenset()
    assert V_of(ex2, letters("x1~ x2~ y1 y2 y3")) == {"3"}
    assert V_of(ex2, ex2.signed_edges()) == frozenset(ex2.vertices)


@settings(max_examples=100, deadline=None)
@given(graphs(max_edges=5), st.integers(0, 2**32 - 1))
def test_V_matches_boundary_balls(g, seed):
    rng = random.Random(seed)
    sig = list(g.signed_edges())
    A = boundary_closure(g, rng.sample(sig, rng.randint(0, len(sig))))
    V = V_of(g, A)
    for v in g.vertices:
        assert (v in V) == (boundary_ball(g, A, v, 3) is not None)


@pytest.mark.parametrize("g", [sample("e23"), sample("ex9-2"), lamplighter_graph()])
def test_cantor(g):
    report = is_cantor(g)
    assert report.cantor and not report.isolated_at


def test_isolated_point_witness():
    report = is_cantor(sample("single-edge"))
    assert not report.cantor
    for v, b in report.witnesses.items():
        assert b is not None and b.base == v and b.boundary() <= report.dead_ends


def reach_by_words(g, start, limit):
    """Letters that can end an admissible word of length >= 2 beginning with ``start``."""
    out = set()
    frontier = [(start,)]
    for _ in range(limit):
        nxt = []
        for w in frontier:
            for t in g.successors[w[0]]:
                out.add(t)
                nxt.append((t,) + w)
        frontier = nxt
    return out


@pytest.mark.parametrize("name", ["ex9-2", "ex9-3", "e12", "two-cycle", "split-range"])
def test_linking_against_word_search(name):
    g = sample(name)
    links = linking_relation(g)
    for s in g.signed_edges():
        want = {t.inverse() for t in reach_by_words(g, s, 7)}
        assert links[s] == want


def brute_pairs(g):
    sig = list(g.signed_edges())
    links = linking_relation(g)

    def unlinked_to(B):
        return frozenset(a for a in sig if not any(a in links[b] for b in B))

    def unlinked_from(A):
        return frozenset(b for b in sig if not any(a in links[b] for a in A))

    out = set()
    for r in range(len(sig) + 1):
        for B in itertools.combinations(sig, r):
            A = unlinked_to(B)
            B2 = unlinked_from(A)
            if A and B2:
                out.add(frozenset((A, B2)))
    return out


@pytest.mark.parametrize("name", ["ex9-2", "ex9-3", "e12", "single-edge", "trivial-fan"])
def test_pairs_are_all_concepts(name):
    g = sample(name)
    got = {frozenset((p.left, p.right)) for p in maximal_unlinkable_pairs(g, include_degenerate=True)}
    assert got == brute_pairs(g)


@settings(max_examples=40, deadline=None)
@given(graphs(max_edges=4))
def test_pairs_are_unlinkable_and_maximal(g):
    sig = frozenset(g.signed_edges())
    for p in maximal_unlinkable_pairs(g, include_degenerate=True):
        assert not can_be_linked(g, p.left, p.right)
        for s in sig - p.left:
            assert can_be_linked(g, p.left | {s}, p.right)
        for s in sig - p.right:
            assert can_be_linked(g, p.left, p.right | {s})


def test_single_pair_graph_has_one_pair(ex3):
    pairs = maximal_unlinkable_pairs(ex3)
    assert len(pairs) == 1
    assert pairs[0].left == pairs[0].right == letters("x1 x2 x3 y1~ y2~ y3~")


def test_e23_fully_linkable(e23):
    assert maximal_unlinkable_pairs(e23) == []


def test_not_prime_graph_has_witness_pair(ex2):
    witness = letters("x1~ x2~ y1 y2 y3")
    assert any(witness in (p.core_left, p.core_right) for p in maximal_unlinkable_pairs(ex2))


def test_prime_verdicts(e23, ex2, ex3):
    assert isinstance(is_prime(e23), Prime)
    assert isinstance(is_prime(ex3), Prime)
    v = is_prime(ex2)
    assert isinstance(v, NotPrime)
    assert v.pair.core_left == letters("x1~ x2~ y1 y2 y3")
    assert v.V_core_left == {"3"}
    assert v.to_json()["verdict"] == "not_prime"


def test_not_applicable():
    assert isinstance(is_prime(sample("single-edge")), NotApplicable)


def test_connectivity_cross_check(e23, ex2, ex3):
    assert is_prime(e23).connectivity == {0: True, 1: True, 2: True}
    assert is_prime(ex3).agrees
    v = is_prime(ex2)
    assert admissibly_connected(ex2) and v.connectivity[1] is False and v.agrees
