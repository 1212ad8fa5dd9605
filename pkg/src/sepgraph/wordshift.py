"""Binary two-sided subshifts seen through the lamplighter separated graph.

Vertices of level n are binary words: layer 0 holds the words of length n
(the empty word is named ``v``) and layer 1 the words of length n + 1. At
even n the alpha edges drop the last letter and the beta edges the first;
at odd n the roles swap. Edges are named ``a<word>`` or ``b<word>`` after
their source word.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Union

from .bratteli import BratteliTower, export_tower, tower
from .core import SeparatedGraph
from .errors import NotFiniteType
from .hereditary import Closure, VertexSet, quotient_graph, tower_ideal

EMPTY = "v"
WORD_CONVENTION = (
    "level n: layer 0 = binary words of length n ('v' is the empty word), layer 1 = words of "
    "length n+1; for even n edge a<u> maps u to u[:-1] and b<u> maps u to u[1:], for odd n "
    "a<u> maps u to u[1:] and b<u> maps u to u[:-1]"
)


def word_of(name: str) -> str:
    return "" if name == EMPTY else name


def name_of(word: str) -> str:
    return word if word else EMPTY


def lamplighter_graph() -> SeparatedGraph:
    return SeparatedGraph(
        [(EMPTY, 0), ("0", 1), ("1", 1)],
        [("a0", "0", EMPTY), ("a1", "1", EMPTY), ("b0", "0", EMPTY), ("b1", "1", EMPTY)],
        [(EMPTY, "X", ["a0", "a1"]), (EMPTY, "Y", ["b0", "b1"])],
    )


def _merged_word(g: SeparatedGraph, choice: tuple) -> str:
    alpha = next(x for x in choice if x.startswith("a"))
    beta = next(x for x in choice if x.startswith("b"))
    p, q = g.source[alpha], g.source[beta]
    if len(p) % 2 == 1:
        # the next level is odd: alpha drops the first letter, beta the last
        return q + p[-1]
    return p + q[-1]


def _vertex_name(g: SeparatedGraph, u: str, choice: tuple) -> str:
    return _merged_word(g, choice)


def _edge_name(g: SeparatedGraph, i: int, choice: tuple) -> str:
    return choice[i][0] + _merged_word(g, choice)


def lamplighter_tower(n: int, max_vertices: Optional[int] = None) -> BratteliTower:
    """Levels 0..n of the lamplighter tower with word-named vertices and edges."""
    return tower(lamplighter_graph(), n, max_vertices, _vertex_name, _edge_name)


def export_lamplighter_tower(t: BratteliTower, directory) -> Path:
    d = export_tower(t, directory)
    manifest_path = d / "manifest.json"
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    manifest["word_convention"] = WORD_CONVENTION
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return d


# words and languages ------------------------------------------------------------

def parse_words(text: str) -> frozenset:
    words = [w.strip() for w in text.split(",") if w.strip()]
    for w in words:
        if set(w) - {"0", "1"}:
            raise ValueError(f"not a binary word: {w!r}")
    return frozenset(words)


def all_words(n: int) -> list:
    return ["".join(bits) for bits in itertools.product("01", repeat=n)]


def contains_block(word: str, forbidden: Iterable[str]) -> bool:
    return any(f in word for f in forbidden)


def blocked_words(forbidden: Iterable[str], n: int) -> frozenset:
    """W_n: words of length n containing a forbidden block."""
    forbidden = tuple(forbidden)
    return frozenset(w for w in all_words(n) if contains_block(w, forbidden))


def language(forbidden: Iterable[str], n: int) -> frozenset:
    """Words of length <= n that occur in some point of the subshift.

    Windows of length k = max(n, longest forbidden word) form a graph;
    pruning states without a predecessor or successor leaves the windows
    that sit on bi-infinite paths, and every factor of those is in the
    language.
    """
    forbidden = tuple(forbidden)
    k = max([n, 1, *(len(f) for f in forbidden)])
    states = {w for w in all_words(k) if not contains_block(w, forbidden)}
    while True:
        keep = {w for w in states
                if any(w[1:] + c in states and not contains_block(w + c, forbidden) for c in "01")
                and any(c + w[:-1] in states and not contains_block(c + w, forbidden) for c in "01")}
        if keep == states:
            break
        states = keep
    out = set()
    for w in states:
        for i in range(k + 1):
            for j in range(i, min(k, i + n) + 1):
                out.add(w[i:j])
    return frozenset(out)


# ideals -------------------------------------------------------------------------

def _level_words(n: int) -> list:
    return all_words(n) + all_words(n + 1)


def forbidden_to_hset(forbidden: Iterable[str], n: int) -> VertexSet:
    """H_F restricted to level n: the level-n words that occur in no point of X_F."""
    forbidden = frozenset(forbidden)
    lang = language(forbidden, n + 1)
    members = frozenset(name_of(w) for w in _level_words(n) if w not in lang)
    return VertexSet(n, members, True, True)


def seed_closure(forbidden: Iterable[str], n: int, margin: int = 3) -> VertexSet:
    """Closure of the blocked words inside levels 0..n+margin, cut down to level n.

    A finite-depth approximation of H_F from below.
    """
    top = n + margin
    t = lamplighter_tower(top)
    inc = t.union(top)
    forbidden = frozenset(forbidden)
    seeds = [v for v in inc.vertices if contains_block(word_of(v), forbidden)]
    H = Closure(inc)(seeds)
    level = t.levels[n]
    return VertexSet(n, frozenset(v for v in level.vertices if v in H))


@dataclass(frozen=True)
class FiniteType:
    n: int

    def to_json(self) -> dict:
        return {"finite_type": {"n": self.n}}


@dataclass(frozen=True)
class UnknownUpTo:
    bound: int

    def to_json(self) -> dict:
        return {"finite_type": f"unknown_up_to_{self.bound}"}


def word_tower_ideal(forbidden: Iterable[str], N: int, horizon: Optional[int] = None):
    """The hereditary module's tower ideal for H_F on the word-named tower."""
    horizon = N + 2 if horizon is None else horizon
    forbidden = frozenset(forbidden)
    t = lamplighter_tower(horizon)
    seeds = {k: forbidden_to_hset(forbidden, k).vertices for k in range(horizon + 1)}
    return t, tower_ideal(t, seeds, N, horizon)


def finite_type_detect(forbidden: Iterable[str], N: int,
                       horizon: Optional[int] = None) -> Union[FiniteType, UnknownUpTo]:
    """Smallest n <= N whose level part already generates H_F on every level up to the horizon."""
    _, ideal = word_tower_ideal(forbidden, N, horizon)
    if ideal.finite_type is None:
        return UnknownUpTo(N)
    return FiniteType(ideal.finite_type)


def word_quotient(forbidden: Iterable[str], n: int, horizon: Optional[int] = None) -> SeparatedGraph:
    forbidden = frozenset(forbidden)
    verdict = finite_type_detect(forbidden, n, horizon)
    if not isinstance(verdict, FiniteType):
        raise NotFiniteType(f"H_F is not generated at any level up to {n}")
    g = lamplighter_tower(n).levels[n]
    return quotient_graph(g, forbidden_to_hset(forbidden, n).vertices)


def periodic_orbit_family(word: str) -> frozenset:
    """Forbidden words whose subshift is the orbit of ...www...: all other words of length |w|."""
    rotations = {word[i:] + word[:i] for i in range(len(word))}
    return frozenset(w for w in all_words(len(word)) if w not in rotations)


def even_shift_family(max_length: int) -> frozenset:
    """The even-shift blocks 0 1^(2j+1) 0 of length at most max_length."""
    return frozenset("0" + "1" * k + "0" for k in range(1, max_length - 1, 2))
