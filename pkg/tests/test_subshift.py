import itertools
import random

import pytest

from sepgraph.bratteli import one_graph, tower
from sepgraph.core import SignedEdge, admissible_paths_from, load, parse_word, save
from sepgraph.errors import NoSuchBall, RadiusTooSmall, UnstableBallSet
from sepgraph.samples import sample, sample_names
from sepgraph.subshift import (Ball, BallDictionary, RecodedAlphabet, all_balls, ball_recode, check_graph_ball,
                               contains_pattern, enumerate_balls, extendable_balls, prune_allowed_balls,
                               represent_finite_type, represent_one_step)
from sepgraph.wordshift import lamplighter_graph

W = parse_word
a, A, b, B = SignedEdge("a"), SignedEdge("a", -1), SignedEdge("b"), SignedEdge("b", -1)


def ball(r, *words, base=None):
    return Ball(r, {W(x) for x in ("",) + words}, base)


def test_e23_one_balls(e23):
    assert len(enumerate_balls(e23, 1)) == 7


def test_lamplighter_one_balls():
    assert len(enumerate_balls(lamplighter_graph(), 1)) == 6


def test_single_edge_balls():
    got = set(enumerate_balls(sample("single-edge"), 1))
    assert got == {ball(1, "e", base="v"), ball(1, "e~", base="u")}


def test_radius_zero(e23):
    assert len(enumerate_balls(e23, 0)) == len(e23.vertices)


def brute_balls(g, v, n):
    """Every word set at v of admissible paths that passes the ball conditions."""
    paths = [p for p in admissible_paths_from(g, v, n) if p]
    if len(paths) > 16:
        return None
    out = set()
    for r in range(len(paths) + 1):
        for S in itertools.combinations(paths, r):
            cand = Ball(n, set(S) | {()}, v)
            if check_graph_ball(g, cand):
                out.add(cand)
    return out


@pytest.mark.parametrize("name", ["e12", "single-edge", "two-cycle", "trivial-fan", "split-range", "cross"])
def test_balls_match_brute_force(name):
    g = sample(name)
    for n in (1, 2):
        for v in g.vertices:
            slow = brute_balls(g, v, n)
            if slow is None:
                continue
            fast = {x for x in enumerate_balls(g, n) if x.base == v}
            assert fast == slow


@pytest.mark.parametrize("name", sample_names())
def test_enumerated_balls_are_graph_balls(name):
    g = sample(name)
    for x in enumerate_balls(g, 2):
        assert check_graph_ball(g, x)


def test_vertex_ball_level_one(e23):
    t = tower(e23, 1)
    got = BallDictionary(t).vertex_ball("v[a1|b1]", 1)
    assert got.words == {(), (A.__class__("a1", -1),), (SignedEdge("b1", -1),)}


@pytest.mark.parametrize("name", sample_names())
def test_vertex_ball_round_trip(name):
    t = tower(sample(name), 1)
    book = BallDictionary(t)
    for v in t.levels[1].vertices:
        assert book.ball_vertex(book.vertex_ball(v, 1)) == v


def test_missing_ball(e23):
    book = BallDictionary(tower(e23, 1))
    with pytest.raises(NoSuchBall):
        book.ball_vertex(ball(1, "a1", base="v"))


def test_vertex_ball_image_is_enumeration(e22):
    t = tower(e22, 3)
    book = BallDictionary(t)
    for n in range(4):
        assert {book.vertex_ball(v, n) for v in t.levels[n].vertices} == set(enumerate_balls(e22, n))


def test_graph_recoding_lands_in_next_level(e22):
    t = tower(e22, 2)
    book = BallDictionary(t)
    balls = [book.vertex_ball(v, 2) for v in t.levels[2].vertices]
    rec = RecodedAlphabet.from_allowed(balls, 1)
    recoded = {rec.recode(x) for x in balls}
    assert len(recoded) == len(enumerate_balls(one_graph(e22), 1))
    assert all(x.radius == 1 for x in recoded)


def test_recode_round_trip():
    allowed = prune_allowed_balls("ab", 2, [ball(2, "a", "a a")])
    rec = RecodedAlphabet.from_allowed(allowed, 1)
    sample_balls = random.Random(0).sample(allowed, 200)
    for x in sample_balls:
        y = rec.recode(x)
        assert y.radius == x.radius - 1
        assert rec.unrecode(y).words == x.words


def test_recode_needs_room():
    x = ball(1, "a")
    with pytest.raises(RadiusTooSmall):
        ball_recode(x, 1, [x])


def test_all_one_balls_count():
    assert len(all_balls("ab", 1)) == 2 ** 4


def test_forbid_everything():
    ones = all_balls("ab", 1)
    assert prune_allowed_balls("ab", 1, ones) == []


def test_nothing_forbidden():
    assert len(prune_allowed_balls("ab", 1, [])) == 16


def worked():
    return ball(1, "a", "a~", "b", "b~"), ball(1, "a", "a~", "b")


def test_worked_subshift_survives_pruning():
    u, v = worked()
    others = [x for x in all_balls("ab", 1) if x not in (u, v)]
    assert set(prune_allowed_balls("ab", 1, others)) == {u, v}


@pytest.mark.parametrize("forbidden", [
    [ball(1, "a")],
    [ball(1, "b~")],
    [ball(1, "a", "a~", "b", "b~")],
    [ball(1, "a", "b"), ball(1, "a~")],
])
def test_pruning_matches_extension_oracle(forbidden):
    assert set(prune_allowed_balls("ab", 1, forbidden)) == set(extendable_balls("ab", 1, forbidden, 1))


def test_one_letter_pruning_matches_deeper_oracle():
    forbidden = [ball(1, "a"), ball(2, "a~", "a~ a~")]
    for R in (1, 2):
        fs = [f for f in forbidden if f.radius <= R]
        assert set(prune_allowed_balls("a", R, fs)) == set(extendable_balls("a", R, fs, 2))


def test_contains_pattern():
    big = ball(2, "a", "a a", "b")
    assert contains_pattern(big, ball(1, "a", "b"))
    assert contains_pattern(big, ball(1, "a", "a~"))
    assert not contains_pattern(big, ball(1, "a"))


def test_worked_representation():
    u, v = worked()
    rep = represent_one_step("ab", [u, v])
    g = rep.graph
    names = {x: k for k, x in rep.balls.items()}
    assert (len(g.layer0), len(g.layer1), len(g.edges)) == (2, 6, 12)
    assert len(g.groups[names[u]]) == 4 and len(g.groups[names[v]]) == 3
    assert len(g.edges) == 2 * len(g.layer1)


def test_trivial_ball_representation():
    rep = represent_one_step("ab", [ball(1)])
    assert (len(rep.graph.layer0), len(rep.graph.layer1), len(rep.graph.edges)) == (1, 0, 0)


def test_unstable_ball_set():
    with pytest.raises(UnstableBallSet):
        represent_one_step("ab", [ball(1, "a")])


def test_finite_type_radius_one_is_one_step():
    ft = represent_finite_type("ab", 1, [])
    assert ft.graph == represent_one_step("ab", all_balls("ab", 1)).graph


def test_worked_via_forbidden_complement():
    u, v = worked()
    others = [x for x in all_balls("ab", 1) if x not in (u, v)]
    assert represent_finite_type("ab", 1, others).graph == represent_one_step("ab", [u, v]).graph


def test_radius_two_representation():
    forbidden = [ball(2, "a", "a a")]
    ft = represent_finite_type("a", 2, forbidden)
    g = ft.graph
    assert load(save(g)) == g
    assert len(g.edges) == 2 * len(g.layer1)
    recoded = {ft.recoded.recode(x) for x in ft.allowed}
    assert set(ft.representation.balls.values()) == recoded


def test_ball_json_round_trip():
    x = ball(2, "a", "a b", base="B0")
    assert Ball.from_json(x.to_json()) == x
