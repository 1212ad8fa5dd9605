"""Separated graphs, their Bratteli towers, ideal lattices, subshifts and simplicity tests."""

__version__ = "0.1.0"

from .core import SeparatedGraph, SignedEdge, load, load_file, save  # noqa: E402
from .errors import SepGraphError  # noqa: E402

__all__ = ["SeparatedGraph", "SignedEdge", "SepGraphError", "load", "load_file", "save", "__version__"]
