"""Random small separated graphs and relation matrices for property checks."""

from __future__ import annotations

import random
from typing import Optional

from .core import SeparatedGraph


def random_separated_graph(rng: random.Random, max_edges: int = 6, max_layer0: int = 3,
                           max_layer1: int = 3, trivial: bool = False,
                           no_isolated: bool = False) -> SeparatedGraph:
    """A bipartite separated graph; ``trivial`` puts each fibre in a single group."""
    while True:
        n0 = rng.randint(1, max_layer0)
        n1 = rng.randint(1, max_layer1)
        m = rng.randint(1, max_edges)
        lay0 = [f"u{i}" for i in range(n0)]
        lay1 = [f"p{i}" for i in range(n1)]
        edges = [(f"e{k}", rng.choice(lay1), rng.choice(lay0)) for k in range(m)]
        if no_isolated:
            used = {s for _, s, _ in edges} | {r for _, _, r in edges}
            if used != set(lay0) | set(lay1):
                continue
        groups = []
        for v in lay0:
            fibre = [e for e, _, r in edges if r == v]
            if not fibre:
                continue
            if trivial:
                groups.append((v, f"G{v}", fibre))
                continue
            parts = rng.randint(1, len(fibre))
            rng.shuffle(fibre)
            cuts = sorted(rng.sample(range(1, len(fibre)), parts - 1)) if parts > 1 else []
            bounds = [0, *cuts, len(fibre)]
            for i in range(parts):
                groups.append((v, f"G{v}_{i}", sorted(fibre[bounds[i]:bounds[i + 1]])))
        return SeparatedGraph([(v, 0) for v in lay0] + [(v, 1) for v in lay1], edges, groups)


def random_matrix(rng: random.Random, max_rows: int = 8, max_cols: int = 8,
                  bound: int = 4, rows: Optional[int] = None, cols: Optional[int] = None) -> list:
    r = rows if rows is not None else rng.randint(1, max_rows)
    c = cols if cols is not None else rng.randint(1, max_cols)
    return [[rng.randint(-bound, bound) for _ in range(c)] for _ in range(r)]
