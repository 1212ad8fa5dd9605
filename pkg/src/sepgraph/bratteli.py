"""The 1-graph construction, separated Bratteli towers and graph monoids."""

from __future__ import annotations

import itertools
import json
import math
import os
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, NamedTuple, Optional

from .core import Incidence, SeparatedGraph, save
from .errors import SizeLimitExceeded
from .intlinalg import cokernel

DEFAULT_MAX_VERTICES = 200_000
ENV_MAX_VERTICES = "SEPGRAPH_MAX_VERTICES"


def vertex_budget(explicit: Optional[int] = None) -> int:
    if explicit is not None:
        return explicit
    env = os.environ.get(ENV_MAX_VERTICES)
    return int(env) if env else DEFAULT_MAX_VERTICES


def default_vertex_name(g: SeparatedGraph, u: str, choice: tuple) -> str:
    if not choice:
        # no groups at u: the only tuple is empty, so tag it with u itself
        return f"v[@{u}]"
    return "v[" + "|".join(choice) + "]"


def default_edge_name(g: SeparatedGraph, i: int, choice: tuple) -> str:
    slots = list(choice)
    slots[i] = "_"
    return f"a[{choice[i]}][" + "|".join(slots) + "]"


@dataclass(frozen=True)
class LevelNaming:
    """How level k+1 is built from level k.

    ``vertex_tuple`` maps each new layer-1 vertex to (u, (x1, ..., xk));
    ``edge_symbol`` maps each new edge to (i, (x1, ..., xk)) meaning the
    edge that drops slot i, whose range is s(x_i). The group of a new edge
    at s(x_i) is named x_i.
    """

    vertex_tuple: dict
    edge_symbol: dict

    def to_json(self) -> dict:
        return {
            "vertices": {v: {"at": u, "choice": list(c)} for v, (u, c) in sorted(self.vertex_tuple.items())},
            "edges": {e: {"slot": i, "choice": list(c)} for e, (i, c) in sorted(self.edge_symbol.items())},
        }


def level_size(g: SeparatedGraph) -> tuple[int, int]:
    """(vertex count, edge count) of the 1-graph, without building it."""
    nverts = len(g.layer1)
    nedges = 0
    for u in g.layer0:
        sizes = [len(grp.edges) for grp in g.groups[u]]
        prod = math.prod(sizes)
        nverts += prod
        nedges += len(sizes) * prod
    return nverts, nedges


def derive_level(g: SeparatedGraph,
                 vertex_name: Callable = default_vertex_name,
                 edge_name: Callable = default_edge_name,
                 max_vertices: Optional[int] = None) -> tuple[SeparatedGraph, LevelNaming]:
    budget = vertex_budget(max_vertices)
    nverts, _ = level_size(g)
    if nverts > budget:
        raise SizeLimitExceeded(f"next level would have {nverts} vertices (budget {budget})")

    vertices = [(w, 0) for w in g.layer1]
    edges = []
    members: dict = {(w, x): [] for w in g.layer1 for x in g.out_edges[w]}
    vertex_tuple = {}
    edge_symbol = {}
    for u in g.layer0:
        for choice in itertools.product(*(grp.edges for grp in g.groups[u])):
            name = vertex_name(g, u, choice)
            vertices.append((name, 1))
            vertex_tuple[name] = (u, choice)
            for i, x in enumerate(choice):
                ename = edge_name(g, i, choice)
                target = g.source[x]
                edges.append((ename, name, target))
                edge_symbol[ename] = (i, choice)
                members[(target, x)].append(ename)
    groups = [(w, x, members[(w, x)]) for w in g.layer1 for x in g.out_edges[w]]
    return SeparatedGraph(vertices, edges, groups), LevelNaming(vertex_tuple, edge_symbol)


def one_graph(g: SeparatedGraph, max_vertices: Optional[int] = None) -> SeparatedGraph:
    return derive_level(g, max_vertices=max_vertices)[0]


@dataclass(frozen=True)
class BratteliTower:
    levels: tuple
    namings: tuple  # namings[k] builds levels[k + 1] from levels[k]
    vertex_name: Callable = field(default=default_vertex_name, compare=False, repr=False)
    edge_name: Callable = field(default=default_edge_name, compare=False, repr=False)

    @property
    def height(self) -> int:
        return len(self.levels) - 1

    def __getitem__(self, k: int) -> SeparatedGraph:
        return self.levels[k]

    def extended(self, n: int, max_vertices: Optional[int] = None) -> "BratteliTower":
        levels = list(self.levels)
        namings = list(self.namings)
        while len(levels) <= n:
            nxt, naming = derive_level(levels[-1], self.vertex_name, self.edge_name, max_vertices)
            levels.append(nxt)
            namings.append(naming)
        return BratteliTower(tuple(levels), tuple(namings), self.vertex_name, self.edge_name)

    def union(self, n: Optional[int] = None) -> Incidence:
        """(F_n, D^n): levels 0..n glued along shared vertices."""
        n = self.height if n is None else n
        return Incidence.union(self.levels[k].incidence() for k in range(n + 1))

    def generators(self, n: Optional[int] = None) -> list[str]:
        n = self.height if n is None else n
        out = list(self.levels[0].layer0)
        for k in range(n + 1):
            out.extend(self.levels[k].layer1)
        return out

    def layer_sizes(self) -> list[tuple[int, int]]:
        return [(len(g.layer0), len(g.layer1)) for g in self.levels]


def tower(g: SeparatedGraph, n: int, max_vertices: Optional[int] = None,
          vertex_name: Callable = default_vertex_name,
          edge_name: Callable = default_edge_name) -> BratteliTower:
    if n < 0:
        raise ValueError("tower height must be non-negative")
    return BratteliTower((g,), (), vertex_name, edge_name).extended(n, max_vertices)


def export_tower(t: BratteliTower, directory) -> Path:
    """Write ``level_k.sgf`` files and a ``manifest.json`` with the naming maps."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    for k, g in enumerate(t.levels):
        (d / f"level_{k}.sgf").write_text(save(g), encoding="utf-8")
    manifest = {
        "schema": 1,
        "height": t.height,
        "levels": [
            {"file": f"level_{k}.sgf", "layer0": len(g.layer0), "layer1": len(g.layer1),
             "edges": len(g.edges)}
            for k, g in enumerate(t.levels)
        ],
        "naming": [nm.to_json() for nm in t.namings],
        "refinement": [refinement_map(t, k) for k in range(t.height)],
    }
    (d / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n",
                                     encoding="utf-8")
    return d


def refinement_map(t: BratteliTower, k: int) -> dict:
    """Generator substitution a_u -> sum of a_v(x) over tuples at u; layer-1 generators stay put.

    Only the substitution is recorded; injectivity on monoids is not checked.
    """
    g = t.levels[k]
    naming = t.namings[k]
    image: dict = {u: [] for u in g.layer0}
    for v, (u, _) in naming.vertex_tuple.items():
        image[u].append(v)
    out = {u: sorted(vs) for u, vs in image.items()}
    out.update({w: [w] for w in g.layer1})
    return out


# monoids -----------------------------------------------------------------

@dataclass(frozen=True)
class MonoidPresentation:
    generators: tuple
    relations: tuple  # (lhs, ((generator, multiplicity), ...))

    @property
    def relation_matrix(self) -> list[list[int]]:
        index = {gname: i for i, gname in enumerate(self.generators)}
        rows = []
        for lhs, rhs in self.relations:
            row = [0] * len(self.generators)
            row[index[lhs]] += 1
            for gen, mult in rhs:
                row[index[gen]] -= mult
            rows.append(row)
        return rows

    def to_json(self) -> dict:
        return {
            "generators": list(self.generators),
            "relations": [{"lhs": lhs, "rhs": {g: m for g, m in rhs}} for lhs, rhs in self.relations],
        }


def _relations(g: SeparatedGraph) -> list:
    rels = []
    for v in g.layer0:
        for grp in g.groups[v]:
            rhs = Counter(g.source[e] for e in grp.edges)
            rels.append((v, tuple(sorted(rhs.items()))))
    return rels


def monoid_presentation(t, n: Optional[int] = None) -> MonoidPresentation:
    """Presentation of M(F_n, D^n). A bare graph is treated as a height-0 tower."""
    if isinstance(t, SeparatedGraph):
        t = BratteliTower((t,), ())
    n = t.height if n is None else n
    if n > t.height:
        raise ValueError(f"tower has height {t.height}, asked for level {n}")
    rels = []
    for k in range(n + 1):
        rels.extend(_relations(t.levels[k]))
    return MonoidPresentation(tuple(t.generators(n)), tuple(rels))


class Grothendieck(NamedTuple):
    free_rank: int
    torsion: list

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}


def grothendieck(p: MonoidPresentation) -> Grothendieck:
    rank, torsion = cokernel(p.relation_matrix, len(p.generators))
    return Grothendieck(rank, torsion)
