"""Graphviz DOT export with edges colored by group."""

from __future__ import annotations

from .core import SeparatedGraph
from .report import PALETTE


def _q(name: str) -> str:
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(g: SeparatedGraph, title: str = "separated_graph") -> str:
    lines = [f"digraph {_q(title)} {{", "  rankdir=BT;", "  node [shape=circle, fontsize=10];"]
    for layer, rank in ((g.layer1, "min"), (g.layer0, "max")):
        if layer:
            lines.append(f"  {{ rank={rank}; " + " ".join(_q(v) + ";" for v in layer) + " }")
    for v in g.layer0:
        for i, grp in enumerate(g.groups[v]):
            color = PALETTE[i % len(PALETTE)]
            for e in grp.edges:
                lines.append(f"  {_q(g.source[e])} -> {_q(v)} [label={_q(e)}, color={_q(color)}, "
                             f"fontcolor={_q(color)}, tooltip={_q(grp.name)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
