"""Bundled example graphs in SGF form."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .core import SeparatedGraph, load, load_file


def sample_names() -> list[str]:
    folder = resources.files("sepgraph") / "corpus"
    return sorted(p.name[:-4] for p in folder.iterdir() if p.name.endswith(".sgf"))


def sample(name: str) -> SeparatedGraph:
    text = (resources.files("sepgraph") / "corpus" / f"{name}.sgf").read_text(encoding="utf-8")
    return load(text)


def load_graph(ref: str) -> SeparatedGraph:
    """A path to an SGF file, or the name of a bundled sample (``e23`` or ``e23.sgf``)."""
    path = Path(ref)
    if not path.exists():
        name = ref[:-4] if ref.endswith(".sgf") else ref
        if name in sample_names():
            return sample(name)
    return load_file(path)
