"""Balls of convex subshifts: enumeration, recoding and graph representation.

A ball is a finite right-convex set of reduced words containing the empty
word. Words keep the written order of :mod:`sepgraph.core`, so dropping the
first element of a word gives its right segment.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Optional, Sequence

from .bratteli import BratteliTower
from .core import (SeparatedGraph, SignedEdge, format_word, free_reduce, inverse_word,
                   letter_key, parse_word, word_key)
from .errors import (NoSuchBall, RadiusTooSmall, SizeLimitExceeded, UnknownVertex,
                     UnstableBallSet)

DEFAULT_BALL_CAP = 2_000_000


@dataclass(frozen=True)
class Ball:
    radius: int
    words: frozenset
    base: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "words", frozenset(self.words))

    def sorted_words(self) -> list:
        return sorted(self.words, key=word_key)

    def key(self):
        return (self.radius, len(self.words), tuple(word_key(w) for w in self.sorted_words()),
                self.base or "")

    def letters(self) -> list:
        return sorted((w[0] for w in self.words if len(w) == 1), key=letter_key)

    def is_right_convex(self) -> bool:
        return () in self.words and all(w[1:] in self.words for w in self.words if w)

    def boundary(self) -> frozenset:
        """Terminal letters of the maximal words."""
        extended = {w[1:] for w in self.words if w}
        return frozenset(w[0] for w in self.words if w and w not in extended)

    def to_json(self) -> dict:
        out = {"radius": self.radius, "words": [format_word(w) for w in self.sorted_words()]}
        if self.base is not None:
            out["base"] = self.base
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "Ball":
        return cls(int(data["radius"]), frozenset(parse_word(w) for w in data["words"]),
                   data.get("base"))

    def __str__(self):
        body = ", ".join(format_word(w) or "1" for w in self.sorted_words())
        return f"{{{body}}}"


def canonical(balls: Iterable[Ball]) -> list:
    return sorted(set(balls), key=Ball.key)


def translate(words: Iterable, alpha: Sequence[SignedEdge]) -> frozenset:
    """The configuration seen from ``alpha``: {reduce(g·alpha^-1) : g in words}."""
    back = inverse_word(alpha)
    return frozenset(free_reduce(w + back) for w in words)


def sub_ball(words: Iterable, alpha: Sequence[SignedEdge], r: int) -> frozenset:
    """(alpha.B)^r, meaningful when |alpha| + r does not exceed the radius of B."""
    return frozenset(w for w in translate(words, alpha) if len(w) <= r)


# balls of Omega(E, C) ------------------------------------------------------

def _local_options(g: SeparatedGraph, p: str, last: Optional[SignedEdge]) -> list:
    """Alternative sets of continuation letters at a frontier word ending at p."""
    if g.layer(p) == 1:
        return [tuple(SignedEdge(e, 1) for e in g.out_edges[p]
                      if last is None or e != last.edge)]
    choices = []
    for grp in g.groups[p]:
        if last is not None and last.sign > 0 and g.group(last.edge) == grp:
            continue
        choices.append([SignedEdge(e, -1) for e in grp.edges])
    return [tuple(c) for c in itertools.product(*choices)]


def balls_at(g: SeparatedGraph, v: str, n: int, cap: int = DEFAULT_BALL_CAP) -> list:
    g.layer(v)
    # each entry: (words, frontier of (word, endpoint))
    partial = [(frozenset({()}), [((), v)])]
    for _ in range(n):
        nxt = []
        for words, frontier in partial:
            per_node = []
            for w, p in frontier:
                per_node.append([(w, p, opts) for opts in _local_options(g, p, w[0] if w else None)])
            for combo in itertools.product(*per_node):
                new_words = set(words)
                new_frontier = []
                for w, _, opts in combo:
                    for s in opts:
                        nw = (s,) + w
                        new_words.add(nw)
                        new_frontier.append((nw, g.hat_range(s)))
                nxt.append((frozenset(new_words), new_frontier))
                if len(nxt) > cap:
                    raise SizeLimitExceeded(f"more than {cap} balls at {v!r}")
        partial = nxt
    return [Ball(n, words, v) for words, _ in partial]


def enumerate_balls(g: SeparatedGraph, n: int, cap: int = DEFAULT_BALL_CAP) -> list:
    if n < 0:
        raise ValueError("radius must be non-negative")
    out = []
    for v in g.vertices:
        out.extend(balls_at(g, v, n, cap))
        if len(out) > cap:
            raise SizeLimitExceeded(f"more than {cap} balls")
    return canonical(out)


def check_graph_ball(g: SeparatedGraph, b: Ball) -> bool:
    """Ball conditions checked directly on the word set: right-convex, admissible, full local choices."""
    if () not in b.words or not b.is_right_convex() or b.base is None:
        return False
    if any(len(w) > b.radius for w in b.words):
        return False
    ends = {(): b.base}
    for w in sorted(b.words, key=len):
        if not w:
            continue
        s = w[0]
        prev = ends.get(w[1:])
        if s.edge not in g.source or g.hat_source(s) != prev:
            return False
        if len(w) > 1 and not g.can_follow(w[1], s):
            return False
        ends[w] = g.hat_range(s)
    for w in b.words:
        if len(w) >= b.radius:
            continue
        p = ends[w]
        local = {x[0] for x in b.words if len(x) == len(w) + 1 and x[1:] == w}
        if w:
            local.add(w[0].inverse())
        if g.layer(p) == 1:
            if local != {SignedEdge(e, 1) for e in g.out_edges[p]}:
                return False
        else:
            if any(s.sign > 0 for s in local):
                return False
            per_group = {}
            for s in local:
                per_group.setdefault(g.group_of[s.edge], []).append(s)
            if len(local) != len(g.groups[p]) or any(len(v) != 1 for v in per_group.values()):
                return False
            if len(per_group) != len(g.groups[p]):
                return False
    return True


# the vertex <-> ball dictionary along a tower ---------------------------------

class BallDictionary:
    """Realizes v -> B(v) for vertices of level n, as balls over level-0 letters."""

    def __init__(self, t: BratteliTower):
        self.t = t
        self._over = lru_cache(maxsize=None)(self._over_impl)
        self._index: dict = {}

    def _letter(self, k: int, s: SignedEdge) -> SignedEdge:
        """Level-(k+1) signed edge -> the level-k letter it traverses."""
        i, choice = self.t.namings[k].edge_symbol[s.edge]
        return SignedEdge(choice[i], -s.sign)

    def _base(self, k: int, j: int, v: str) -> str:
        if j == 0:
            return v
        b = self._base(k + 1, j - 1, v)
        g = self.t.levels[k]
        if g.has_vertex(b) and g.layer(b) == 1:
            return b
        return self.t.namings[k].vertex_tuple[b][0]

    def _over_impl(self, k: int, j: int, v: str) -> frozenset:
        if j == 0:
            return frozenset({()})
        g = self.t.levels[k]
        if j == 1:
            if g.has_vertex(v) and g.layer(v) == 1:
                return frozenset({()} | {(SignedEdge(e, 1),) for e in g.out_edges[v]})
            _, choice = self.t.namings[k].vertex_tuple[v]
            return frozenset({()} | {(SignedEdge(x, -1),) for x in choice})
        upper = self._over(k + 1, j - 1, v)
        g1 = self.t.levels[k + 1]
        out = set()
        for beta in upper:
            steps = []
            p = self._base(k + 1, j - 1, v)
            out.update(self._over(k, 1, p))
            for s in reversed(beta):
                steps.insert(0, self._letter(k, s))
                p = g1.hat_range(s)
                prefix = tuple(steps)
                out.update(free_reduce(w + prefix) for w in self._over(k, 1, p))
        return frozenset(out)

    def vertex_ball(self, v: str, n: int) -> Ball:
        if n > self.t.height or not self.t.levels[n].has_vertex(v):
            raise UnknownVertex(f"{v!r} is not a vertex of level {n}")
        return Ball(n, self._over(0, n, v), self._base(0, n, v))

    def ball_vertex(self, b: Ball) -> str:
        n = b.radius
        if n not in self._index:
            if n > self.t.height:
                raise NoSuchBall(f"tower has no level {n}")
            self._index[n] = {self.vertex_ball(v, n): v for v in self.t.levels[n].vertices}
        try:
            return self._index[n][b]
        except KeyError:
            raise NoSuchBall(f"no level-{n} vertex has ball {b}") from None


def vertex_ball(t: BratteliTower, v: str, n: int) -> Ball:
    return BallDictionary(t).vertex_ball(v, n)


def ball_vertex(t: BratteliTower, b: Ball) -> str:
    return BallDictionary(t).ball_vertex(b)


# balls over an alphabet --------------------------------------------------------

def alphabet_letters(alphabet: Iterable[str]) -> tuple:
    return tuple(SignedEdge(a, sg) for a in sorted(alphabet) for sg in (1, -1))


def all_balls(alphabet: Iterable[str], R: int, cap: int = DEFAULT_BALL_CAP) -> list:
    """Every R-ball of the free group on ``alphabet`` (no base tag)."""
    letters = alphabet_letters(alphabet)

    def below(w, depth):
        if depth == 0:
            return [frozenset()]
        conts = [s for s in letters if not w or s != w[0].inverse()]
        out = []
        for mask in range(1 << len(conts)):
            chosen = [conts[i] for i in range(len(conts)) if mask >> i & 1]
            subs = [[frozenset({(s,) + w}) | t for t in below((s,) + w, depth - 1)] for s in chosen]
            for combo in itertools.product(*subs):
                out.append(frozenset().union(*combo))
                if len(out) > cap:
                    raise SizeLimitExceeded(f"more than {cap} {R}-balls")
        return out

    return canonical(Ball(R, t | {()}) for t in below((), R))


def contains_pattern(b: Ball, pattern: Ball) -> bool:
    r = pattern.radius
    return any(sub_ball(b.words, a, r) == pattern.words
               for a in b.words if len(a) + r <= b.radius)


def _shift_key(b: Ball, s: SignedEdge, outward: bool) -> frozenset:
    """Part of a neighbouring R-ball that ``b`` already determines."""
    R = b.radius
    words = translate(b.words, (s,)) if outward else b.words
    back = s.inverse() if outward else s
    return frozenset(w for w in words
                     if len(w) <= R - 1 or (len(w) == R and w[-1] == back))


def prune_allowed_balls(alphabet: Iterable[str], R: int, forbidden: Iterable[Ball],
                        candidates: Optional[Iterable[Ball]] = None,
                        cap: int = DEFAULT_BALL_CAP) -> list:
    """Greatest set of allowed R-balls closed under one-step extension.

    A ball survives while every neighbour letter s has some surviving ball
    that agrees with it on their overlap.
    """
    forbidden = list(forbidden)
    for f in forbidden:
        if f.radius > R:
            raise ValueError(f"forbidden ball of radius {f.radius} exceeds R={R}")
    pool = list(candidates) if candidates is not None else all_balls(alphabet, R, cap)
    alive = {b for b in pool if not any(contains_pattern(b, f) for f in forbidden)}
    needs = {b: [(s, _shift_key(b, s, True)) for s in b.letters()] for b in alive}
    offers: dict = {}
    for b in alive:
        for s in b.letters():
            offers.setdefault((s, _shift_key(b, s, False)), set()).add(b)
    changed = True
    while changed:
        changed = False
        for b in list(alive):
            if any(not offers.get((s.inverse(), key)) for s, key in needs[b]):
                alive.discard(b)
                for s in b.letters():
                    offers[(s, _shift_key(b, s, False))].discard(b)
                changed = True
    return canonical(alive)


def extendable_balls(alphabet: Iterable[str], R: int, forbidden: Iterable[Ball],
                     depth: int, cap: int = DEFAULT_BALL_CAP) -> list:
    """R-balls that sit at the centre of some pattern-free (R + depth)-ball.

    Brute force over all (R + depth)-balls; an independent check on
    :func:`prune_allowed_balls` for small alphabets.
    """
    forbidden = list(forbidden)
    out = set()
    for big in all_balls(alphabet, R + depth, cap):
        if not any(contains_pattern(big, f) for f in forbidden):
            out.add(Ball(R, sub_ball(big.words, (), R)))
    return canonical(out)


# recoding ----------------------------------------------------------------------

@dataclass(frozen=True)
class RecodedAlphabet:
    """Symbols [B <-a B'] built from a family of allowed R-balls."""

    n: int
    radius: int
    balls: tuple  # canonical n-balls (no base tag)
    symbols: tuple  # (target index, letter, source index)
    _ball_index: dict = field(default=None, compare=False, repr=False)

    @classmethod
    def from_allowed(cls, allowed: Sequence[Ball], n: int) -> "RecodedAlphabet":
        allowed = list(allowed)
        if not allowed:
            return cls(n, n, (), (), {})
        R = allowed[0].radius
        if any(b.radius != R for b in allowed):
            raise ValueError("allowed balls must share one radius")
        if n >= R:
            raise RadiusTooSmall(f"cannot recode radius {R} by n={n}")
        nballs = set()
        for b in allowed:
            for a in b.words:
                if len(a) <= R - n:
                    nballs.add(Ball(n, sub_ball(b.words, a, n)))
        balls = tuple(canonical(nballs))
        index = {x.words: i for i, x in enumerate(balls)}
        symbols = set()
        for b in allowed:
            for a in b.words:
                if 0 < len(a) <= R - n:
                    symbols.add(_step_symbol(b, a, n, index)[0])
        syms = tuple(sorted(symbols, key=lambda t: (t[1], t[0], t[2])))
        return cls(n, R, balls, syms, index)

    def ball_index(self, words: frozenset) -> int:
        return self._ball_index[words]

    def ball_name(self, i: int) -> str:
        return f"B{i}"

    def symbol_name(self, sym) -> str:
        ti, a, si = sym
        return f"[B{ti}<{a}|B{si}]"

    def names(self) -> list:
        return [self.symbol_name(s) for s in self.symbols]

    def by_name(self) -> dict:
        return {self.symbol_name(s): s for s in self.symbols}

    def recode(self, b: Ball) -> Ball:
        """B^[n]: the phi_n image of the words of length <= R - n."""
        R = b.radius
        if self.n >= R:
            raise RadiusTooSmall(f"cannot recode radius {R} by n={self.n}")
        words = set()
        for a in b.words:
            if len(a) > R - self.n:
                continue
            letters = []
            for k in range(1, len(a) + 1):
                suffix = a[len(a) - k:]
                sym, sign = _step_symbol(b, suffix, self.n, self._ball_index)
                letters.insert(0, SignedEdge(self.symbol_name(sym), sign))
            words.add(tuple(letters))
        root = self._ball_index[sub_ball(b.words, (), self.n)]
        return Ball(R - self.n, words, self.ball_name(root))

    def unrecode(self, d: Ball) -> Ball:
        """Inverse of :meth:`recode` via the union of translated n-balls."""
        syms = self.by_name()
        root = int(d.base[1:])
        out = set()
        for beta in d.words:
            cur = root
            prefix: tuple = ()
            out.update(self.balls[cur].words)
            for t in reversed(beta):
                ti, a, si = syms[t.edge]
                if t.sign > 0:
                    assert cur == si
                    step, cur = SignedEdge(a, 1), ti
                else:
                    assert cur == ti
                    step, cur = SignedEdge(a, -1), si
                prefix = (step,) + prefix
                out.update(free_reduce(w + prefix) for w in self.balls[cur].words)
        return Ball(self.radius, frozenset(out))


def _step_symbol(b: Ball, suffix: tuple, n: int, index: dict):
    """Symbol and sign for the last step of ``suffix`` inside ``b``."""
    s = suffix[0]
    here = index[sub_ball(b.words, suffix, n)]
    before = index[sub_ball(b.words, suffix[1:], n)]
    if s.sign > 0:
        return (here, s.edge, before), 1
    return (before, s.edge, here), -1


def ball_recode(b: Ball, n: int, allowed: Sequence[Ball]) -> Ball:
    if n >= b.radius:
        raise RadiusTooSmall(f"cannot recode radius {b.radius} by n={n}")
    return RecodedAlphabet.from_allowed(allowed, n).recode(b)


# graph representation ---------------------------------------------------------

@dataclass(frozen=True)
class Representation:
    graph: SeparatedGraph
    balls: dict  # layer-0 vertex name -> Ball
    symbols: dict  # layer-1 vertex name -> (target name, letter, source name)

    def to_json(self) -> dict:
        return {
            "corner": sorted(self.balls),
            "balls": {k: b.to_json() for k, b in sorted(self.balls.items())},
            "symbols": {k: {"target": t, "letter": a, "source": s}
                        for k, (t, a, s) in sorted(self.symbols.items())},
        }


def is_pruning_stable(balls: Sequence[Ball]) -> bool:
    have = set()
    for b in balls:
        have.update(b.letters())
    return all(s.inverse() in have for b in balls for s in b.letters())


def represent_one_step(alphabet: Iterable[str], balls: Sequence[Ball]) -> Representation:
    alphabet = sorted(set(alphabet))
    balls = canonical(balls)
    if not balls:
        raise UnstableBallSet("no allowed balls")
    for b in balls:
        if b.radius != 1:
            raise ValueError("represent_one_step expects 1-balls")
        for s in b.letters():
            if s.edge not in alphabet:
                raise ValueError(f"letter {s.edge!r} is not in the alphabet")
    if not is_pruning_stable(balls):
        raise UnstableBallSet("some ball letter has no allowed ball across it")
    bname = {b: f"B{i}" for i, b in enumerate(balls)}
    vertices = [(bname[b], 0) for b in balls]
    edges = []
    symbols = {}
    plus: dict = {}
    minus: dict = {}
    holding: dict = {}
    for b in balls:
        for s in b.letters():
            holding.setdefault(s, []).append(b)
    for a in alphabet:
        for src in holding.get(SignedEdge(a, 1), ()):
            for tgt in holding.get(SignedEdge(a, -1), ()):
                name = f"[{bname[tgt]}<{a}|{bname[src]}]"
                symbols[name] = (bname[tgt], a, bname[src])
                vertices.append((name, 1))
                edges.append((name + "+", name, bname[tgt]))
                edges.append((name + "-", name, bname[src]))
                plus.setdefault((tgt, a), []).append(name + "+")
                minus.setdefault((src, a), []).append(name + "-")
    groups = []
    for b in balls:
        for s in b.letters():
            members = plus[(b, s.edge)] if s.sign < 0 else minus[(b, s.edge)]
            groups.append((bname[b], str(s), members))
    g = SeparatedGraph(vertices, edges, groups)
    return Representation(g, {bname[b]: b for b in balls}, symbols)


@dataclass(frozen=True)
class FiniteTypeRepresentation:
    representation: Representation
    allowed: tuple  # pruned R-balls
    recoded: Optional[RecodedAlphabet]

    @property
    def graph(self) -> SeparatedGraph:
        return self.representation.graph

    def to_json(self) -> dict:
        out = self.representation.to_json()
        out["allowed_balls"] = len(self.allowed)
        if self.recoded is not None:
            out["recoded_alphabet"] = {
                self.recoded.symbol_name(s): {"letter": s[1]} for s in self.recoded.symbols}
            out["n_balls"] = {self.recoded.ball_name(i): b.to_json()
                              for i, b in enumerate(self.recoded.balls)}
        return out


def represent_finite_type(alphabet: Iterable[str], R: int, forbidden: Iterable[Ball],
                          cap: int = DEFAULT_BALL_CAP) -> FiniteTypeRepresentation:
    alphabet = sorted(set(alphabet))
    allowed = prune_allowed_balls(alphabet, R, forbidden, cap=cap)
    if R == 1:
        return FiniteTypeRepresentation(represent_one_step(alphabet, allowed), tuple(allowed), None)
    rec = RecodedAlphabet.from_allowed(allowed, R - 1)
    one_balls = [rec.recode(b) for b in allowed]
    rep = represent_one_step(rec.names(), one_balls)
    return FiniteTypeRepresentation(rep, tuple(allowed), rec)
