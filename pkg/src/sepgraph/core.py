"""Separated graphs, signed edges, words and the SGF text format.

A separated graph here is always bipartite: every edge runs from a layer-1
vertex (its source) to a layer-0 vertex (its range), and the edges ending
at a layer-0 vertex are partitioned into ordered, named groups.

Words are tuples of :class:`SignedEdge` stored in written order, so the
letter applied first is the *last* element (paths read right to left).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import (
    DisconnectedWord,
    DuplicateName,
    EndpointMismatch,
    GroupOverlap,
    NotBipartite,
    ParseError,
    UncoveredEdge,
    UnknownEdge,
    UnknownVertex,
)

INVERSE_MARK = "~"
_NAME_RE = re.compile(r"^[^\s#~][^\s]*$")


@dataclass(frozen=True)
class SignedEdge:
    """An edge of the double graph: ``edge`` traversed forwards (+1) or backwards (-1)."""

    edge: str
    sign: int = 1

    def inverse(self) -> "SignedEdge":
        return SignedEdge(self.edge, -self.sign)

    @property
    def positive(self) -> bool:
        return self.sign > 0

    def __str__(self) -> str:
        return self.edge if self.sign > 0 else self.edge + INVERSE_MARK

    @classmethod
    def parse(cls, token: str) -> "SignedEdge":
        if token.endswith(INVERSE_MARK):
            return cls(token[:-1], -1)
        return cls(token, 1)


Word = tuple  # tuple[SignedEdge, ...] in written order


def letter_key(s: SignedEdge):
    return (s.edge, 0 if s.sign > 0 else 1)


def word_key(w: Sequence[SignedEdge]):
    return (len(w), tuple(letter_key(s) for s in w))


def parse_word(text: str) -> Word:
    """``"a b~"`` -> (a, b^-1). The empty string is the trivial word."""
    return tuple(SignedEdge.parse(t) for t in text.split())


def format_word(w: Sequence[SignedEdge]) -> str:
    return " ".join(str(s) for s in w)


def inverse_word(w: Sequence[SignedEdge]) -> Word:
    return tuple(s.inverse() for s in reversed(w))


def free_reduce(letters: Iterable[SignedEdge]) -> Word:
    """Cancel adjacent ``x x^-1`` pairs (free group reduction)."""
    out: list[SignedEdge] = []
    for s in letters:
        if out and out[-1].edge == s.edge and out[-1].sign == -s.sign:
            out.pop()
        else:
            out.append(s)
    return tuple(out)


def multiply(p: Sequence[SignedEdge], q: Sequence[SignedEdge]) -> Word:
    """Reduced free-group product ``p·q`` (q is applied first)."""
    return free_reduce(tuple(p) + tuple(q))


class Group(NamedTuple):
    name: str
    edges: tuple  # sorted edge names


@dataclass(frozen=True)
class Incidence:
    """Bare vertex/edge/group data used by closure computations.

    It does not require bipartiteness, so it also describes finite unions of
    tower levels and non-separated orientations.
    """

    vertices: tuple
    source: Mapping[str, str]
    range: Mapping[str, str]
    groups: Mapping[str, tuple]  # vertex -> tuple of frozensets of edges

    @cached_property
    def in_edges(self) -> dict:
        acc: dict = {v: [] for v in self.vertices}
        for e, r in self.range.items():
            acc[r].append(e)
        return acc

    @staticmethod
    def union(parts: Iterable["Incidence"]) -> "Incidence":
        vertices: dict = {}
        source: dict = {}
        rng: dict = {}
        groups: dict = {}
        for p in parts:
            for v in p.vertices:
                vertices.setdefault(v, None)
            for e, s in p.source.items():
                if e in source and (source[e], rng[e]) != (s, p.range[e]):
                    raise DuplicateName(f"edge {e!r} defined twice with different endpoints")
                source[e] = s
                rng[e] = p.range[e]
            for v, gs in p.groups.items():
                if gs:
                    if v in groups and groups[v] != gs:
                        raise DuplicateName(f"vertex {v!r} carries groups at two levels")
                    groups[v] = gs
        return Incidence(tuple(vertices), source, rng, groups)


class SeparatedGraph:
    """Immutable finite bipartite separated graph."""

    def __init__(self, vertices: Iterable[tuple[str, int]],
                 edges: Iterable[tuple[str, str, str]],
                 groups: Iterable[tuple[str, str, Iterable[str]]]):
        _check(list(vertices), list(edges), list(groups), None, self)

    # construction helper filled by _check
    def _fill(self, layer, edge_rows, group_rows):
        self._layer = dict(layer)
        self.vertices = tuple(sorted(layer, key=lambda v: (layer[v], v)))
        self.layer0 = tuple(v for v in self.vertices if layer[v] == 0)
        self.layer1 = tuple(v for v in self.vertices if layer[v] == 1)
        self.edges = tuple(sorted(e for e, _, _ in edge_rows))
        self.source = {e: s for e, s, _ in edge_rows}
        self.range = {e: r for e, _, r in edge_rows}
        grouped: dict = {v: [] for v in self.layer0}
        self.group_of = {}
        for v, gname, members in group_rows:
            idx = len(grouped[v])
            grouped[v].append(Group(gname, tuple(sorted(members))))
            for e in members:
                self.group_of[e] = (v, idx)
        self.groups = {v: tuple(gs) for v, gs in grouped.items()}
        out: dict = {v: [] for v in self.layer1}
        for e in self.edges:
            out[self.source[e]].append(e)
        self.out_edges = {v: tuple(es) for v, es in out.items()}

    # basic queries -------------------------------------------------------
    def layer(self, v: str) -> int:
        try:
            return self._layer[v]
        except KeyError:
            raise UnknownVertex(f"unknown vertex {v!r}") from None

    def has_vertex(self, v: str) -> bool:
        return v in self._layer

    def group(self, e: str) -> Group:
        v, idx = self.group_of[e]
        return self.groups[v][idx]

    def group_size(self, e: str) -> int:
        return len(self.group(e).edges)

    def same_group(self, e: str, f: str) -> bool:
        return self.group_of[e] == self.group_of[f]

    def hat_source(self, s: SignedEdge) -> str:
        return self.source[s.edge] if s.sign > 0 else self.range[s.edge]

    def hat_range(self, s: SignedEdge) -> str:
        return self.range[s.edge] if s.sign > 0 else self.source[s.edge]

    def signed_edges(self) -> tuple:
        return tuple(SignedEdge(e, sg) for e in self.edges for sg in (1, -1))

    @cached_property
    def departing(self) -> dict:
        """vertex -> signed edges whose source in the double graph is that vertex."""
        acc: dict = {v: [] for v in self.vertices}
        for e in self.edges:
            acc[self.source[e]].append(SignedEdge(e, 1))
            acc[self.range[e]].append(SignedEdge(e, -1))
        return {v: tuple(sorted(ls, key=letter_key)) for v, ls in acc.items()}

    def can_follow(self, earlier: SignedEdge, later: SignedEdge) -> bool:
        """True when ``later·earlier`` is a connected admissible two-letter word."""
        if self.hat_range(earlier) != self.hat_source(later):
            return False
        if later.sign > 0 and earlier.sign < 0:
            return later.edge != earlier.edge
        if later.sign < 0 and earlier.sign > 0:
            return not self.same_group(later.edge, earlier.edge)
        return True

    @cached_property
    def successors(self) -> dict:
        """signed edge -> signed edges that may follow it admissibly."""
        return {s: tuple(t for t in self.departing[self.hat_range(s)] if self.can_follow(s, t))
                for s in self.signed_edges()}

    def incidence(self) -> Incidence:
        return Incidence(
            self.vertices, dict(self.source), dict(self.range),
            {v: tuple(frozenset(g.edges) for g in gs) for v, gs in self.groups.items()},
        )

    def warnings(self) -> list[str]:
        return [f"layer-1 vertex {v!r} has no outgoing edges" for v in self.layer1
                if not self.out_edges[v]]

    # equality ------------------------------------------------------------
    def _key(self):
        return (
            tuple((v, self._layer[v]) for v in self.vertices),
            tuple((e, self.source[e], self.range[e]) for e in self.edges),
            tuple((v, self.groups[v]) for v in self.layer0),
        )

    def __eq__(self, other):
        return isinstance(other, SeparatedGraph) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return (f"SeparatedGraph({len(self.layer0)}+{len(self.layer1)} vertices, "
                f"{len(self.edges)} edges)")

    def group_sizes(self) -> list[int]:
        return sorted(len(g.edges) for gs in self.groups.values() for g in gs)


def _check(vertices, edges, groups, lines, target=None):
    """Validate raw rows and fill ``target``; ``lines`` maps row kinds to line numbers."""
    lines = lines or {}
    vline = lines.get("vertex", [None] * len(vertices))
    eline = lines.get("edge", [None] * len(edges))
    gline = lines.get("group", [None] * len(groups))

    layer: dict = {}
    for (name, lay), ln in zip(vertices, vline):
        if not _NAME_RE.match(name):
            raise ParseError(f"invalid vertex name {name!r}", ln)
        if lay not in (0, 1):
            raise ParseError(f"vertex {name!r}: layer must be 0 or 1", ln)
        if name in layer:
            raise DuplicateName(f"duplicate vertex {name!r}", ln)
        layer[name] = lay

    seen_edges: dict = {}
    for (name, s, r), ln in zip(edges, eline):
        if not _NAME_RE.match(name):
            raise ParseError(f"invalid edge name {name!r}", ln)
        if name in seen_edges:
            raise DuplicateName(f"duplicate edge {name!r}", ln)
        for v in (s, r):
            if v not in layer:
                raise UnknownVertex(f"edge {name!r} names undeclared vertex {v!r}", ln)
        if layer[s] != 1 or layer[r] != 0:
            raise NotBipartite(f"edge {name!r} must run from layer 1 to layer 0", ln)
        seen_edges[name] = (s, r)

    covered: dict = {}
    gnames: set = set()
    group_rows = []
    for (v, gname, members), ln in zip(groups, gline):
        members = list(members)
        if v not in layer:
            raise UnknownVertex(f"group {gname!r} at undeclared vertex {v!r}", ln)
        if layer[v] != 0:
            raise NotBipartite(f"group {gname!r} placed at layer-1 vertex {v!r}", ln)
        if (v, gname) in gnames:
            raise DuplicateName(f"duplicate group {gname!r} at {v!r}", ln)
        gnames.add((v, gname))
        if not members:
            raise ParseError(f"group {gname!r} at {v!r} is empty", ln)
        for e in members:
            if e not in seen_edges:
                raise UnknownEdge(f"group {gname!r} names undeclared edge {e!r}", ln)
            if seen_edges[e][1] != v:
                raise GroupOverlap(f"edge {e!r} does not range at {v!r}", ln)
            if e in covered:
                raise GroupOverlap(f"edge {e!r} already belongs to group {covered[e]!r}", ln)
            covered[e] = gname
        group_rows.append((v, gname, members))

    for (name, _, _), ln in zip(edges, eline):
        if name not in covered:
            raise UncoveredEdge(f"edge {name!r} belongs to no group", ln)

    if target is None:
        target = SeparatedGraph.__new__(SeparatedGraph)
    target._fill(layer, [(e, s, r) for e, (s, r) in seen_edges.items()], group_rows)
    return target


# SGF ---------------------------------------------------------------------

def load(text: str) -> SeparatedGraph:
    vertices, edges, groups = [], [], []
    lines = {"vertex": [], "edge": [], "group": []}
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        kind = tok[0]
        if kind == "vertex":
            if len(tok) != 3 or not tok[2].startswith("layer="):
                raise ParseError("expected: vertex NAME layer=0|1", ln)
            try:
                lay = int(tok[2][len("layer="):])
            except ValueError:
                raise ParseError("layer must be 0 or 1", ln) from None
            vertices.append((tok[1], lay))
        elif kind == "edge":
            if len(tok) != 4:
                raise ParseError("expected: edge NAME SOURCE RANGE", ln)
            edges.append((tok[1], tok[2], tok[3]))
        elif kind == "group":
            if len(tok) < 3:
                raise ParseError("expected: group RANGE GNAME e1 e2 ...", ln)
            groups.append((tok[1], tok[2], tok[3:]))
        else:
            raise ParseError(f"unknown directive {kind!r}", ln)
        lines[kind].append(ln)
    return _check(vertices, edges, groups, lines)


def load_file(path) -> SeparatedGraph:
    with open(path, encoding="utf-8") as fh:
        return load(fh.read())


def save(g: SeparatedGraph) -> str:
    out = ["# separated graph"]
    for v in g.vertices:
        out.append(f"vertex {v} layer={g.layer(v)}")
    for e in g.edges:
        out.append(f"edge {e} {g.source[e]} {g.range[e]}")
    for v in g.layer0:
        for grp in g.groups[v]:
            out.append(" ".join(["group", v, grp.name, *grp.edges]))
    return "\n".join(out) + "\n"


# words and paths ---------------------------------------------------------

def _check_letters(g: SeparatedGraph, w: Sequence[SignedEdge]):
    for s in w:
        if s.edge not in g.source:
            raise UnknownEdge(f"unknown edge {s.edge!r}")


def is_connected(g: SeparatedGraph, w: Sequence[SignedEdge]) -> bool:
    return all(g.hat_range(w[i + 1]) == g.hat_source(w[i]) for i in range(len(w) - 1))


def is_admissible(g: SeparatedGraph, w: Sequence[SignedEdge]) -> bool:
    _check_letters(g, w)
    if not is_connected(g, w):
        raise DisconnectedWord(f"word {format_word(w)!r} is not a path in the double graph")
    return all(g.can_follow(w[i + 1], w[i]) for i in range(len(w) - 1))


def word_source(g: SeparatedGraph, w: Sequence[SignedEdge]) -> str:
    return g.hat_source(w[-1])


def word_range(g: SeparatedGraph, w: Sequence[SignedEdge]) -> str:
    return g.hat_range(w[0])


def reduced_product(g: SeparatedGraph, p: Sequence[SignedEdge], q: Sequence[SignedEdge]) -> Word:
    """``p·q`` with full cancellation; q is traversed first."""
    _check_letters(g, p)
    _check_letters(g, q)
    if p and q and g.hat_source(p[-1]) != g.hat_range(q[0]):
        raise EndpointMismatch(
            f"{format_word(q)!r} ends at {g.hat_range(q[0])!r} but "
            f"{format_word(p)!r} starts at {g.hat_source(p[-1])!r}")
    return multiply(p, q)


def is_one_path(g: SeparatedGraph, w: Sequence[SignedEdge]) -> bool:
    """Admissible word whose letters all lie in singleton groups."""
    return all(g.group_size(s.edge) == 1 for s in w) and is_admissible(g, w)


def admissible_paths_from(g: SeparatedGraph, u: str, maxlen: int):
    """Yield every admissible path starting at ``u`` with length <= maxlen."""
    g.layer(u)
    yield ()
    stack = [(s,) for s in g.departing[u]]
    while stack:
        w = stack.pop()
        yield w
        if len(w) < maxlen:
            for t in g.successors[w[0]]:
                stack.append((t,) + w)


def paths_between(g: SeparatedGraph, u: str, v: str, maxlen: int) -> list:
    if maxlen < 0:
        raise ValueError("maxlen must be non-negative")
    g.layer(v)
    found = []
    for w in admissible_paths_from(g, u, maxlen):
        end = word_range(g, w) if w else u
        if end == v:
            found.append(w)
    return sorted(found, key=word_key)
