"""Hereditary saturated vertex sets, their lattice, lifts, quotients and tower ideals.

Conventions: H is hereditary when r(e) in H forces s(e) in H, and saturated
when a group X at v with every source in H forces v into H.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Union

from .bratteli import BratteliTower, LevelNaming, derive_level
from .core import Incidence, SeparatedGraph
from .errors import (InconsistentLevels, InputNotHereditary, InputNotSaturated,
                     SizeLimitExceeded, UnknownVertex)

DEFAULT_LATTICE_CAP = 2 ** 20


@dataclass(frozen=True)
class VertexSet:
    level: int
    vertices: frozenset
    hereditary: Optional[bool] = field(default=None, compare=False)
    saturated: Optional[bool] = field(default=None, compare=False)

    def to_json(self) -> dict:
        return {"level": self.level, "vertices": sorted(self.vertices)}

    @classmethod
    def from_json(cls, data: Mapping) -> "VertexSet":
        return cls(int(data.get("level", 0)), frozenset(data["vertices"]))

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(sorted(self.vertices))


def _incidence(g) -> Incidence:
    return g.incidence() if isinstance(g, SeparatedGraph) else g


def _members(S) -> frozenset:
    return S.vertices if isinstance(S, VertexSet) else frozenset(S)


def is_hereditary(g, H) -> bool:
    inc = _incidence(g)
    H = _members(H)
    return all(inc.source[e] in H for e, r in inc.range.items() if r in H)


def is_saturated(g, H) -> bool:
    inc = _incidence(g)
    H = _members(H)
    return all(v in H for v, gs in inc.groups.items() for X in gs
               if all(inc.source[e] in H for e in X))


class Closure:
    """Least hereditary saturated superset, with per-graph precomputation."""

    def __init__(self, g):
        inc = _incidence(g)
        self.inc = inc
        self.vertex_set = frozenset(inc.vertices)
        self._hered: dict = {v: [] for v in inc.vertices}
        for e, r in inc.range.items():
            self._hered[r].append(inc.source[e])
        # each group becomes (range vertex, distinct sources); a source watches its groups
        self._groups = []
        self._watch: dict = {v: [] for v in inc.vertices}
        for v, gs in inc.groups.items():
            for X in gs:
                srcs = frozenset(inc.source[e] for e in X)
                gid = len(self._groups)
                self._groups.append((v, srcs))
                for s in srcs:
                    self._watch[s].append(gid)

    def __call__(self, S: Iterable[str]) -> frozenset:
        H: set = set()
        missing = [len(srcs) for _, srcs in self._groups]
        stack = []
        for v in S:
            if v not in self.vertex_set:
                raise UnknownVertex(f"unknown vertex {v!r}")
            stack.append(v)
        while stack:
            v = stack.pop()
            if v in H:
                continue
            H.add(v)
            stack.extend(s for s in self._hered[v] if s not in H)
            for gid in self._watch[v]:
                missing[gid] -= 1
                if missing[gid] == 0:
                    w = self._groups[gid][0]
                    if w not in H:
                        stack.append(w)
        return frozenset(H)


def closure_hs(g, S, level: int = 0) -> VertexSet:
    H = Closure(g)(_members(S))
    return VertexSet(level, H, True, True)


@dataclass(frozen=True)
class HLattice:
    elements: tuple  # frozensets, sorted by (size, names)
    covers: tuple  # (i, j): elements[i] is covered by elements[j]

    def maximal_proper(self) -> list:
        full = self.elements[-1]
        below = [x for x in self.elements if x != full]
        return [x for x in below if not any(x < y for y in below)]

    def is_trivial(self) -> bool:
        return len(self.elements) <= 2

    def to_json(self) -> dict:
        return {"elements": [sorted(x) for x in self.elements],
                "covers": [list(c) for c in self.covers]}


def enumerate_hsets(g, cap: int = DEFAULT_LATTICE_CAP) -> HLattice:
    """All hereditary saturated subsets, with their Hasse diagram.

    Every closed set is reached from the closure of the empty set by
    repeatedly adding one vertex and closing.
    """
    close = Closure(g)
    verts = sorted(close.vertex_set)
    start = close(())
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for H in frontier:
            for v in verts:
                if v in H:
                    continue
                K = close(H | {v})
                if K not in seen:
                    seen.add(K)
                    if len(seen) > cap:
                        raise SizeLimitExceeded(f"more than {cap} hereditary saturated sets")
                    nxt.append(K)
        frontier = nxt
    elements = tuple(sorted(seen, key=lambda s: (len(s), sorted(s))))
    covers = []
    for i, a in enumerate(elements):
        ups = [j for j, b in enumerate(elements) if a < b]
        for j in ups:
            if not any(elements[k] < elements[j] and a < elements[k] for k in ups):
                covers.append((i, j))
    return HLattice(elements, tuple(covers))


def nontrivial_witness(g) -> Optional[frozenset]:
    """Some hereditary saturated set other than the empty and full ones, if any."""
    close = Closure(g)
    full = close.vertex_set
    best = None
    for v in sorted(full):
        K = close((v,))
        if K != full and (best is None or (len(K), sorted(K)) < (len(best), sorted(best))):
            best = K
    return best


def _require_closed(g, H):
    if not is_hereditary(g, H):
        raise InputNotHereditary("vertex set is not hereditary")
    if not is_saturated(g, H):
        raise InputNotSaturated("vertex set is not saturated")


def lift_one_level(g: SeparatedGraph, H, nxt: Optional[tuple] = None) -> VertexSet:
    """H_1 in the 1-graph: sources of X(x) for x leaving H, plus H on the shared layer.

    ``nxt`` may carry a precomputed (graph, naming) pair for the next level.
    """
    level = H.level if isinstance(H, VertexSet) else 0
    H = _members(H)
    _require_closed(g, H)
    g1, naming = nxt if nxt is not None else derive_level(g)
    out = {w for w in g.layer1 if w in H}
    for x in g.edges:
        if g.source[x] in H:
            grp = next(gr for gr in g1.groups[g.source[x]] if gr.name == x)
            out.update(g1.source[e] for e in grp.edges)
    result = frozenset(out)
    hered, sat = is_hereditary(g1, result), is_saturated(g1, result)
    assert hered and sat, "lifted set must be hereditary and saturated"
    return VertexSet(level + 1, result, hered, sat)


def quotient_graph(g: SeparatedGraph, H) -> SeparatedGraph:
    H = _members(H)
    for v in H:
        g.layer(v)
    _require_closed(g, H)
    vertices = [(v, g.layer(v)) for v in g.vertices if v not in H]
    edges = [(e, g.source[e], g.range[e]) for e in g.edges if g.source[e] not in H]
    groups = []
    for v in g.layer0:
        if v in H:
            continue
        for grp in g.groups[v]:
            kept = [e for e in grp.edges if g.source[e] not in H]
            groups.append((v, grp.name, kept))
    return SeparatedGraph(vertices, edges, groups)


# ideals spread over a tower ---------------------------------------------

@dataclass(frozen=True)
class TowerIdeal:
    per_level: tuple  # H^(k) as frozensets, k = 0..horizon
    closures: tuple  # H^n restricted to levels 0..horizon, n = 0..N
    bound: int
    horizon: int
    finite_type: Optional[int]
    quotients: tuple = field(default=(), compare=False)

    def finite_type_json(self):
        if self.finite_type is None:
            return f"unknown_up_to_{self.bound}"
        return {"n": self.finite_type}

    def to_json(self, include_quotients: bool = False) -> dict:
        from .core import save
        out = {
            "bound": self.bound,
            "horizon": self.horizon,
            "finite_type": self.finite_type_json(),
            "levels": [{"level": k, "vertices": sorted(h)} for k, h in enumerate(self.per_level)],
            "closure_sizes": [[len(h) for h in c] for c in self.closures],
        }
        if include_quotients:
            out["quotients"] = [save(q) for q in self.quotients]
        return out


SeedSpec = Union[VertexSet, Mapping[int, Iterable[str]]]


def tower_ideal(t: BratteliTower, H: SeedSpec, N: int, horizon: Optional[int] = None,
                with_quotients: bool = True) -> TowerIdeal:
    """Spread H over levels 0..horizon, compute each H^n and look for stabilization.

    H is either a VertexSet at a single level (lifted and closed) or a
    mapping level -> vertices whose consecutive entries must be compatible
    with lifting. Finite type at n means the closure of H^(n) already equals
    H on every level up to the horizon (default N + 2).
    """
    horizon = N + 2 if horizon is None else horizon
    seeds: dict = ({H.level: H.vertices} if isinstance(H, VertexSet)
                   else {int(k): frozenset(v) for k, v in H.items()})
    top = max([horizon, *seeds])
    t = t.extended(top)
    for k, S in sorted(seeds.items()):
        g = t.levels[k]
        for v in S:
            g.layer(v)
        if not (is_hereditary(g, S) and is_saturated(g, S)):
            raise InputNotSaturated(f"seed at level {k} is not hereditary and saturated")
        if k + 1 in seeds:
            lifted = lift_one_level(g, S, (t.levels[k + 1], t.namings[k])).vertices
            if not lifted <= seeds[k + 1]:
                raise InconsistentLevels(f"level {k + 1} does not contain the lift of level {k}")

    close = Closure(t.union(top))
    full = close(set().union(*seeds.values()) if seeds else ())
    level_sets = [frozenset(v for v in t.levels[k].vertices if v in full) for k in range(top + 1)]

    closures = []
    finite = None
    for n in range(min(N, top) + 1):
        Hn = close(level_sets[n])
        closures.append(tuple(frozenset(v for v in t.levels[k].vertices if v in Hn)
                              for k in range(horizon + 1)))
        if finite is None and Hn == full:
            finite = n
    quotients = ()
    if with_quotients:
        quotients = tuple(quotient_graph(t.levels[k], level_sets[k]) for k in range(min(N, top) + 1))
    return TowerIdeal(tuple(level_sets[:horizon + 1]), tuple(closures), N, horizon, finite, quotients)
