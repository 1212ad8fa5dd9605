"""Condition (L), vertex typing, 1-connectivity, cycle classes and the simplicity classifier."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Union

from .bratteli import BratteliTower, tower
from .core import Incidence, SeparatedGraph, SignedEdge, format_word, inverse_word, word_key
from .errors import SizeLimitExceeded
from .hereditary import Closure, enumerate_hsets, nontrivial_witness

DEFAULT_LEVELS = 6
LATTICE_REPORT_LIMIT = 16  # list all maximal elements when a level is this small


# choices and cycles ----------------------------------------------------------

def is_choice_letter(g: SeparatedGraph, s: SignedEdge) -> bool:
    """A path ending with ``s`` is a choice path."""
    if s.sign < 0:
        return False
    own = g.group_of[s.edge]
    v = g.range[s.edge]
    return any(len(grp.edges) >= 2 and (v, i) != own for i, grp in enumerate(g.groups[v]))


def admits_choice(g: SeparatedGraph, v: str) -> bool:
    seen = set(g.departing[v])
    queue = deque(seen)
    while queue:
        s = queue.popleft()
        if is_choice_letter(g, s):
            return True
        for t in g.successors[s]:
            if t not in seen:
                seen.add(t)
                queue.append(t)
    return False


def simple_cycles(g: SeparatedGraph, base: Optional[str] = None, max_len: Optional[int] = None) -> list:
    """Admissible closed paths whose square is admissible and which revisit no vertex.

    Returns (base vertex, word) pairs; every rotation appears with its own base.
    """
    limit = max_len if max_len is not None else 2 * len(g.vertices) + 2
    found = []
    for v in ([base] if base is not None else g.vertices):
        stack = [((s,), {v, g.hat_range(s)}) for s in g.departing[v]]
        while stack:
            w, seen = stack.pop()
            end = g.hat_range(w[0])
            if end == v:
                if g.can_follow(w[0], w[-1]):
                    found.append((v, w))
                continue
            if len(w) >= limit:
                continue
            for t in g.successors[w[0]]:
                nxt = g.hat_range(t)
                if nxt == v or nxt not in seen:
                    stack.append(((t,) + w, seen | {nxt}))
    return sorted(found, key=lambda p: (p[0], word_key(p[1])))


def condition_L(g: SeparatedGraph) -> tuple[bool, Optional[tuple]]:
    """(holds, violating (base, cycle) or None)."""
    verdict: dict = {}
    for v, w in simple_cycles(g):
        if v not in verdict:
            verdict[v] = admits_choice(g, v)
        if not verdict[v]:
            return False, (v, w)
    return True, None


# vertex types -----------------------------------------------------------------

@dataclass(frozen=True)
class VertexType:
    kind: str  # "A", "B1", "B2" or "violation"
    big_group: Optional[str] = None
    big_groups: tuple = ()

    def to_json(self) -> dict:
        out = {"type": self.kind}
        if self.big_group is not None:
            out["big_group"] = self.big_group
        if self.big_groups:
            out["big_groups"] = list(self.big_groups)
        return out


def vertex_types(g: SeparatedGraph) -> dict:
    out = {}
    for v in g.layer0:
        big = [grp.name for grp in g.groups[v] if len(grp.edges) > 1]
        if len(big) > 1:
            out[v] = VertexType("violation", big_groups=tuple(big))
        elif len(big) == 1:
            out[v] = VertexType("A", big_group=big[0])
        else:
            per_source: dict = {}
            for grp in g.groups[v]:
                src = g.source[grp.edges[0]]
                per_source[src] = per_source.get(src, 0) + 1
            out[v] = VertexType("B1" if all(c <= 1 for c in per_source.values()) else "B2")
    return out


def one_components(g: SeparatedGraph) -> list:
    """Classes of vertices joined by 1-paths (letters from singleton groups only)."""
    parent = {v: v for v in g.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in g.edges:
        if g.group_size(e) == 1:
            a, b = find(g.source[e]), find(g.range[e])
            if a != b:
                parent[max(a, b)] = min(a, b)
    classes: dict = {}
    for v in g.vertices:
        classes.setdefault(find(v), []).append(v)
    return sorted((sorted(c) for c in classes.values()), key=lambda c: (c[0], len(c)))


def longest_one_path(g: SeparatedGraph, v: str) -> Optional[int]:
    """Length of the longest 1-path leaving v, or None when 1-paths from v are unbounded."""
    letters = [s for s in g.departing[v] if g.group_size(s.edge) == 1]
    best = 0
    # depth-first over last letters; a repeated letter on the stack means a 1-cycle
    stack = [(s, 1, frozenset({s})) for s in letters]
    while stack:
        s, depth, on_path = stack.pop()
        best = max(best, depth)
        for t in g.successors[s]:
            if g.group_size(t.edge) != 1:
                continue
            if t in on_path:
                return None
            stack.append((t, depth + 1, on_path | {t}))
    return best


# cycle classes ----------------------------------------------------------------

def simple_closed_paths(g: SeparatedGraph, v: str, max_len: Optional[int] = None) -> list:
    """Words gamma^-1 beta gamma at v, gamma vertex-simple and beta a simple cycle, up to inversion."""
    limit = max_len if max_len is not None else 2 * len(g.vertices) + 2
    gammas = [()]
    stack = [((s,), {v, g.hat_range(s)}) for s in g.departing[v]]
    while stack:
        w, seen = stack.pop()
        gammas.append(w)
        if len(w) * 2 >= limit:
            continue
        for t in g.successors[w[0]]:
            if g.hat_range(t) not in seen:
                stack.append(((t,) + w, seen | {g.hat_range(t)}))
    cycles_at: dict = {}
    out = {}
    for gam in gammas:
        u = g.hat_range(gam[0]) if gam else v
        if u not in cycles_at:
            cycles_at[u] = [w for _, w in simple_cycles(g, u, limit)]
        for beta in cycles_at[u]:
            if gam and not (g.can_follow(gam[0], beta[-1]) and g.can_follow(beta[0], gam[0].inverse())):
                continue
            word = inverse_word(gam) + beta + tuple(gam)
            if len(word) > limit:
                continue
            key = min(word, inverse_word(word), key=word_key)
            out[key] = (gam, beta)
    return sorted(out, key=word_key)


def _cycle_key(g: SeparatedGraph, beta: tuple) -> tuple:
    """Rotation- and inversion-invariant name of a cyclic word."""
    forms = []
    for w in (beta, inverse_word(beta)):
        for i in range(len(w)):
            forms.append(w[i:] + w[:i])
    return min(forms, key=word_key)


def cycle_classes(g: SeparatedGraph) -> list:
    """Vertices without choices whose closed paths form an infinite cyclic group, grouped by cycle."""
    classes: dict = {}
    for v in g.vertices:
        if admits_choice(g, v):
            continue
        paths = simple_closed_paths(g, v)
        if len(paths) != 1:
            continue
        w = paths[0]
        # strip the conjugating part to reach the cycle itself
        while len(w) >= 2 and w[0] == w[-1].inverse():
            w = w[1:-1]
        classes.setdefault(_cycle_key(g, w), []).append(v)
    return sorted((sorted(vs) for vs in classes.values()), key=lambda c: c[0])


# non-separated orientation ----------------------------------------------------

@dataclass(frozen=True)
class DirectedGraph:
    """A plain (trivially separated) directed graph."""

    vertices: tuple
    edges: dict  # name -> (source, range)

    def incidence(self) -> Incidence:
        groups: dict = {}
        for e, (_, r) in self.edges.items():
            groups.setdefault(r, set()).add(e)
        return Incidence(self.vertices, {e: s for e, (s, _) in self.edges.items()},
                         {e: r for e, (_, r) in self.edges.items()},
                         {v: (frozenset(es),) for v, es in groups.items()})

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices),
                "edges": {e: {"source": s, "range": r} for e, (s, r) in sorted(self.edges.items())}}


def orient(g: SeparatedGraph) -> tuple[DirectedGraph, dict]:
    """Invert the unique singleton-group edge leaving each layer-1 vertex."""
    flipped = {}
    for w in g.layer1:
        singles = [e for e in g.out_edges[w] if g.group_size(e) == 1]
        if len(singles) != 1:
            raise ValueError(f"layer-1 vertex {w!r} has {len(singles)} singleton-group edges")
        flipped[w] = singles[0]
    inverted = set(flipped.values())
    edges = {e: ((g.range[e], g.source[e]) if e in inverted else (g.source[e], g.range[e]))
             for e in g.edges}
    return DirectedGraph(g.vertices, edges), flipped


# verdicts ---------------------------------------------------------------------

@dataclass(frozen=True)
class NotSimple:
    level: int
    witness: frozenset
    maximal: tuple = ()
    kind: str = field(default="not_simple", init=False)

    def to_json(self) -> dict:
        out = {"verdict": self.kind, "level": self.level, "witness": sorted(self.witness)}
        if self.maximal:
            out["maximal"] = [sorted(m) for m in self.maximal]
        return out


@dataclass(frozen=True)
class GraphAlgebra:
    level: int
    graph: DirectedGraph
    inverted: dict  # layer-1 vertex -> inverted edge
    kind: str = field(default="graph_algebra", init=False)

    def to_json(self) -> dict:
        return {"verdict": self.kind, "level": self.level, "graph": self.graph.to_json(),
                "inverted": dict(sorted(self.inverted.items()))}


@dataclass(frozen=True)
class FreeGroup:
    rank: int
    base: str
    level: int
    closed_paths: tuple = ()
    kind: str = field(default="free_group", init=False)

    def to_json(self) -> dict:
        return {"verdict": self.kind, "rank": self.rank, "base": self.base, "level": self.level,
                "closed_paths": [format_word(w) for w in self.closed_paths]}


@dataclass(frozen=True)
class Inconclusive:
    bound: int
    reason: str
    kind: str = field(default="inconclusive", init=False)

    def to_json(self) -> dict:
        return {"verdict": self.kind, "bound": self.bound, "reason": self.reason}


Verdict = Union[NotSimple, GraphAlgebra, FreeGroup, Inconclusive]


def _grow_to_maximal(g: SeparatedGraph, H: frozenset) -> frozenset:
    close = Closure(g)
    full = close.vertex_set
    for v in sorted(full):
        if v not in H:
            K = close(H | {v})
            if K != full:
                H = K
    return H


def necessary_condition_failures(g: SeparatedGraph) -> list:
    """Local obstructions to simplicity at a level >= 1, as readable strings."""
    problems = []
    types = vertex_types(g)
    for v, t in types.items():
        if t.kind == "violation":
            problems.append(f"{v} has {len(t.big_groups)} groups of size > 1")
    for w in g.layer1:
        singles = [e for e in g.out_edges[w] if g.group_size(e) == 1]
        if not singles:
            problems.append(f"{w} is the source of no singleton group")
        at_a = [e for e in singles if types[g.range[e]].kind == "A"]
        if len(at_a) > 1:
            problems.append(f"{w} is attached to {len(at_a)} type A vertices by singleton groups")
    for v, t in types.items():
        if t.kind == "A" and longest_one_path(g, v) is None:
            problems.append(f"type A vertex {v} starts a 1-cycle")
    return problems


def _mixed_component(g: SeparatedGraph, types: dict) -> bool:
    for comp in one_components(g):
        kinds = {types[v].kind == "A" for v in comp if v in types}
        if len(kinds) > 1:
            return True
    return False


def classify_simplicity(g: SeparatedGraph, N: int = DEFAULT_LEVELS,
                        max_vertices: Optional[int] = None) -> Verdict:
    t = tower(g, 0, max_vertices)
    searched = -1
    for k in range(N + 1):
        try:
            t = t.extended(k, max_vertices)
        except SizeLimitExceeded:
            break
        lvl = t.levels[k]
        searched = k
        witness = nontrivial_witness(lvl)
        if witness is not None:
            maximal = ()
            if len(lvl.vertices) <= LATTICE_REPORT_LIMIT:
                maximal = tuple(enumerate_hsets(lvl).maximal_proper())
            return NotSimple(k, _grow_to_maximal(lvl, witness), maximal)

    start = 1
    for L in range(start, searched + 1):
        lvl = t.levels[L]
        problems = necessary_condition_failures(lvl)
        if problems:
            return Inconclusive(searched, "; ".join(problems))
        types = vertex_types(lvl)
        if _mixed_component(lvl, types):
            continue
        if all(tp.kind == "A" for tp in types.values()):
            graph, flipped = orient(lvl)
            return GraphAlgebra(L, graph, flipped)
        for v in lvl.layer0:
            if types[v].kind != "A":
                paths = simple_closed_paths(lvl, v)
                return FreeGroup(len(paths), v, L, tuple(paths))
    return Inconclusive(searched, "no level up to the bound separates type A from type B")
