import itertools
import json

import pytest
from hypothesis import given, settings, strategies as st

from sepgraph.classify import _cycle_key, simple_cycles
from sepgraph.errors import NotFiniteType
from sepgraph.repro import even_shift_levels
from sepgraph.wordshift import (EMPTY, FiniteType, UnknownUpTo, all_words, blocked_words, even_shift_family,
                                export_lamplighter_tower, finite_type_detect, forbidden_to_hset, lamplighter_graph,
                                lamplighter_tower, language, parse_words, periodic_orbit_family, seed_closure,
                                word_of, word_quotient)


@pytest.fixture(scope="module")
def t6():
    return lamplighter_tower(6)


def test_level_sizes(t6):
    for n, (a, b) in enumerate(t6.layer_sizes()):
        assert (a, b) == (2 ** n, 2 ** (n + 1))
    assert t6.levels[0] == lamplighter_graph()


def test_vertex_words(t6):
    for n, g in enumerate(t6.levels):
        assert {word_of(v) for v in g.layer0} == set(all_words(n))
        assert {word_of(v) for v in g.layer1} == set(all_words(n + 1))


def test_edge_convention(t6):
    for n, g in enumerate(t6.levels):
        for e in g.edges:
            u = word_of(g.source[e])
            assert e[1:] == u
            drop_last = (e[0] == "a") == (n % 2 == 0)
            assert word_of(g.range[e]) == (u[:-1] if drop_last else u[1:])


def test_export_records_convention(tmp_path):
    d = export_lamplighter_tower(lamplighter_tower(2), tmp_path / "lt")
    assert "word_convention" in json.loads((d / "manifest.json").read_text())


def extends(word, forbidden, margin):
    """Brute force: word sits in the middle of a forbidden-free word with margin letters each side."""
    for left in itertools.product("01", repeat=margin):
        for right in itertools.product("01", repeat=margin):
            big = "".join(left) + word + "".join(right)
            if not any(f in big for f in forbidden):
                return True
    return False


FAMILIES = [set(), {"11"}, {"010"}, {"00", "11"}, {"011", "110"}, {"0", "11"}, {"01", "10"},
            periodic_orbit_family("0110"), {"1"}, {"000", "111", "0101"}]


@pytest.mark.parametrize("F", FAMILIES, ids=str)
def test_language_against_extension(F):
    for n in range(0, 5):
        got = {w for w in language(F, n) if len(w) == n}
        want = {w for w in all_words(n) if extends(w, F, 6)}
        assert got == want


def test_even_shift_level_two():
    assert forbidden_to_hset(even_shift_family(11), 2).vertices == {"010"}


def test_empty_family():
    for n in range(4):
        assert forbidden_to_hset(set(), n).vertices == frozenset()


def test_alternating_words():
    H = forbidden_to_hset({"00", "11"}, 1).vertices
    assert set(all_words(2)) - H == {"10", "01"}


@pytest.mark.parametrize("F", [{"11"}, {"010"}, {"00", "11"}, periodic_orbit_family("0110"), {"011", "110"}],
                         ids=str)
def test_seed_closure_agrees(F):
    for n in range(4):
        assert seed_closure(F, n).vertices == forbidden_to_hset(F, n).vertices


def test_seed_closure_is_a_lower_bound():
    F = even_shift_family(9)
    for n in range(4):
        assert seed_closure(F, n, margin=2).vertices <= forbidden_to_hset(F, n).vertices


def test_blocked_words_inside_ideal():
    F = {"010", "11"}
    for n in range(4):
        H = forbidden_to_hset(F, n).vertices
        assert blocked_words(F, n) | blocked_words(F, n + 1) <= H


def test_finite_type_detection():
    assert finite_type_detect({"010"}, 4) == FiniteType(2)
    assert finite_type_detect(set(), 3) == FiniteType(0)
    assert finite_type_detect(even_shift_family(11), 8) == UnknownUpTo(8)


@settings(max_examples=25, deadline=None)
@given(st.sets(st.text(alphabet="01", min_size=2, max_size=3), max_size=3))
def test_finite_families_detected_by_length(F):
    # a family of words of length <= 3 is generated once its words fit in a level
    verdict = finite_type_detect(F, 3)
    assert isinstance(verdict, FiniteType) and verdict.n <= 3


def test_orbit_quotient():
    q = word_quotient(periodic_orbit_family("0110"), 3)
    assert len(q.vertices) == 8
    loops = {_cycle_key(q, c) for _, c in simple_cycles(q)}
    assert len(loops) == 1
    loop = next(iter(loops))
    assert len({q.hat_range(s) for s in loop} & set(q.layer0)) == 4


def test_alternating_quotient():
    q = word_quotient({"00", "11"}, 1)
    assert set(q.layer1) == {"01", "10"}
    loops = {_cycle_key(q, c) for _, c in simple_cycles(q)}
    assert len(loops) == 1


def test_quotient_by_nothing():
    assert word_quotient(set(), 2) == lamplighter_tower(2).levels[2]


def test_even_shift_quotient_refused():
    with pytest.raises(NotFiniteType):
        word_quotient(even_shift_family(9), 3)


def test_even_shift_levels():
    assert even_shift_levels(4) == {1: True, 2: True, 3: True, 4: True}


def test_parse_words():
    assert parse_words("01, 10,") == {"01", "10"}
    with pytest.raises(ValueError):
        parse_words("012")


def test_empty_word_name():
    assert word_of(EMPTY) == ""
