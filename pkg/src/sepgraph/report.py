"""Figures for the reproduction report, rendered off-screen with matplotlib."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

from .core import SeparatedGraph

PALETTE = ["#c0392b", "#2471a3", "#229954", "#b9770e", "#7d3c98", "#17a589", "#a04000", "#566573"]


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def group_colors(g: SeparatedGraph) -> dict:
    """edge -> color, by the position of its group at the range vertex."""
    return {e: PALETTE[g.group_of[e][1] % len(PALETTE)] for e in g.edges}


def plot_tower_sizes(sizes: Sequence[tuple[int, int]], path, title: str = "Tower layer sizes") -> Path:
    plt = _pyplot()
    levels = list(range(len(sizes)))
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.semilogy(levels, [a for a, _ in sizes], "o-", color=PALETTE[0], label="layer 0")
    ax.semilogy(levels, [b for _, b in sizes], "s--", color=PALETTE[1], label="layer 1")
    ax.set_xlabel("level")
    ax.set_ylabel("vertices")
    ax.set_title(title)
    ax.legend(frameon=False)
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=120)
    plt.close(fig)
    return out


def draw_graph(g: SeparatedGraph, path, title: str = "") -> Path:
    """Layer 1 on top, layer 0 below; edges colored by group."""
    plt = _pyplot()
    colors = group_colors(g)
    pos = {}
    for row, layer in ((0.0, g.layer0), (1.0, g.layer1)):
        for i, v in enumerate(layer):
            pos[v] = ((i + 1) / (len(layer) + 1), row)
    width = max(4.0, 0.6 * max(len(g.layer0), len(g.layer1), 1))
    fig, ax = plt.subplots(figsize=(width, 3.5))
    # parallel edges between the same pair get distinct bends
    seen: dict = {}
    for e in g.edges:
        s, r = g.source[e], g.range[e]
        k = seen.get((s, r), 0)
        seen[(s, r)] = k + 1
        bend = 0.15 * ((k + 1) // 2) * (1 if k % 2 else -1)
        ax.annotate("", xy=pos[r], xytext=pos[s],
                    arrowprops=dict(arrowstyle="->", color=colors[e], lw=1.4,
                                    shrinkA=8, shrinkB=8, connectionstyle=f"arc3,rad={bend}"))
    for v, (x, y) in pos.items():
        ax.plot(x, y, "o", color="white", markeredgecolor="black", markersize=14, zorder=3)
        ax.text(x, y + (0.12 if y else -0.12), v, ha="center", va="center", fontsize=7)
    ax.set_xlim(0, 1)
    ax.set_ylim(-0.3, 1.3)
    ax.axis("off")
    if title:
        ax.set_title(title, fontsize=9)
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=120)
    plt.close(fig)
    return out
