"""Command line front end: ``sepgraph VERB [options] INPUT``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import Optional

from . import __version__
from .bratteli import export_tower, grothendieck, monoid_presentation, tower
from .classify import classify_simplicity
from .core import save
from .dot import to_dot
from .errors import SepGraphError
from .hereditary import VertexSet, closure_hs, enumerate_hsets, quotient_graph
from .prime import is_cantor, is_prime
from .samples import load_graph
from .subshift import (Ball, RecodedAlphabet, enumerate_balls, prune_allowed_balls, represent_finite_type,
                       represent_one_step)
from .wordshift import (FiniteType, export_lamplighter_tower, finite_type_detect, forbidden_to_hset,
                        lamplighter_tower, parse_words, word_quotient)

SCHEMA = 1


def _json(payload: dict) -> str:
    return json.dumps({"schema": SCHEMA, **payload}, indent=2, sort_keys=True) + "\n"


def _emit(args, text: str) -> None:
    if getattr(args, "output", None):
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _level_graph(args):
    g = load_graph(args.input)
    n = getattr(args, "level", 0) or 0
    if n == 0:
        return g
    return tower(g, n, args.max_vertices).levels[n]


def _vertex_set(args) -> frozenset:
    if args.set_file:
        data = json.loads(Path(args.set_file).read_text(encoding="utf-8"))
        return VertexSet.from_json(data).vertices
    return frozenset(v.strip() for v in (args.set or "").split(",") if v.strip())


def _ball_spec(path: str) -> dict:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    radius = int(data.get("radius", 1))
    spec = {
        "alphabet": sorted(data["alphabet"]),
        "radius": radius,
        "forbidden": [Ball.from_json({"radius": radius, **b}) if "radius" not in b else Ball.from_json(b)
                      for b in data.get("forbidden", [])],
    }
    if "allowed" in data:
        spec["allowed"] = [Ball.from_json({"radius": radius, **b}) if "radius" not in b else Ball.from_json(b)
                           for b in data["allowed"]]
    return spec


# verbs ---------------------------------------------------------------------------

def cmd_validate(args):
    g = load_graph(args.input)
    _emit(args, _json({"valid": True, "layer0": len(g.layer0), "layer1": len(g.layer1),
                       "edges": len(g.edges), "groups": len(g.group_sizes()), "warnings": g.warnings()}))


def cmd_level(args):
    g = _level_graph(args)
    if args.json:
        _emit(args, _json({"level": args.level, "layer0": len(g.layer0), "layer1": len(g.layer1),
                           "edges": len(g.edges), "group_sizes": sorted(g.group_sizes())}))
    else:
        _emit(args, save(g))


def cmd_tower(args):
    if args.lamplighter:
        t = lamplighter_tower(args.level, args.max_vertices)
    else:
        if not args.input:
            raise SystemExit("tower: INPUT is required unless --lamplighter is given")
        t = tower(load_graph(args.input), args.level, args.max_vertices)
    payload = {"height": t.height, "layer_sizes": [list(s) for s in t.layer_sizes()]}
    if args.out:
        (export_lamplighter_tower if args.lamplighter else export_tower)(t, args.out)
        payload["directory"] = str(args.out)
    _emit(args, _json(payload))


def cmd_hsets(args):
    lat = enumerate_hsets(_level_graph(args))
    _emit(args, _json({"level": args.level, "lattice": lat.to_json(),
                       "maximal": [sorted(m) for m in lat.maximal_proper()], "trivial": lat.is_trivial()}))


def cmd_closure(args):
    H = closure_hs(_level_graph(args), _vertex_set(args), args.level)
    _emit(args, _json({"closure": H.to_json()}))


def cmd_quotient(args):
    _emit(args, save(quotient_graph(_level_graph(args), _vertex_set(args))))


def cmd_k0(args):
    t = tower(load_graph(args.input), args.level, args.max_vertices)
    p = monoid_presentation(t, args.level)
    payload = {"level": args.level, "grothendieck": grothendieck(p).to_json()}
    if args.presentation:
        payload["presentation"] = p.to_json()
    _emit(args, _json(payload))


def cmd_balls(args):
    balls = enumerate_balls(load_graph(args.input), args.radius)
    _emit(args, _json({"radius": args.radius, "count": len(balls), "balls": [b.to_json() for b in balls]}))


def cmd_recode(args):
    spec = _ball_spec(args.input)
    allowed = spec.get("allowed") or prune_allowed_balls(spec["alphabet"], spec["radius"], spec["forbidden"])
    rec = RecodedAlphabet.from_allowed(allowed, args.n)
    _emit(args, _json({
        "n": args.n,
        "alphabet": rec.names(),
        "balls": [{"original": b.to_json(), "recoded": rec.recode(b).to_json()} for b in allowed],
    }))


def cmd_represent(args):
    spec = _ball_spec(args.input)
    if "allowed" in spec and spec["radius"] == 1:
        rep = represent_one_step(spec["alphabet"], spec["allowed"])
        graph, meta = rep.graph, rep.to_json()
    else:
        ft = represent_finite_type(spec["alphabet"], spec["radius"], spec["forbidden"])
        graph, meta = ft.graph, ft.to_json()
    if args.json:
        meta.update(layer0=len(graph.layer0), layer1=len(graph.layer1), edges=len(graph.edges))
        _emit(args, _json(meta))
    else:
        _emit(args, save(graph))


def cmd_classify(args):
    verdict = classify_simplicity(load_graph(args.input), args.bound, args.max_vertices)
    _emit(args, _json(verdict.to_json()))


def cmd_cantor(args):
    _emit(args, _json(is_cantor(load_graph(args.input)).to_json()))


def cmd_prime(args):
    _emit(args, _json(is_prime(load_graph(args.input), max_vertices=args.max_vertices).to_json()))


def cmd_fromwords(args):
    words = parse_words(args.words)
    if args.quotient:
        _emit(args, save(word_quotient(words, args.level)))
        return
    verdict = finite_type_detect(words, args.bound)
    payload = {"words": sorted(words), "hset": forbidden_to_hset(words, args.level).to_json(),
               **verdict.to_json()}
    _emit(args, _json(payload))


def cmd_dot(args):
    _emit(args, to_dot(_level_graph(args), Path(args.input).stem))


def cmd_repro(args):
    from .repro import run_all

    results = run_all()
    buf = io.StringIO()
    writer = csv.writer(buf, delimiter="\t", lineterminator="\n")
    writer.writerow(["criterion", "title", "status", "seconds", "detail"])
    for r in results:
        writer.writerow([r.number, r.title, "PASS" if r.passed else "FAIL", f"{r.seconds:.3f}", r.detail])
    table = buf.getvalue()
    if args.report_dir:
        write_report(Path(args.report_dir), table)
    _emit(args, table)
    return 0 if all(r.passed for r in results) else 1


def write_report(directory: Path, table: str) -> None:
    from .bratteli import one_graph
    from .report import draw_graph, plot_tower_sizes
    from .samples import sample
    from .wordshift import periodic_orbit_family

    directory.mkdir(parents=True, exist_ok=True)
    (directory / "repro.tsv").write_text(table, encoding="utf-8")
    plot_tower_sizes(lamplighter_tower(8).layer_sizes(), directory / "lamplighter_sizes.png",
                     "Lamplighter tower layer sizes")
    draw_graph(one_graph(sample("e23")), directory / "e23_level1.png", "E(2,3) level 1")
    draw_graph(word_quotient(periodic_orbit_family("0110"), 3), directory / "orbit_0110_quotient.png",
               "Level-3 quotient for the orbit of 0110")


# parser --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sepgraph", description="Finite combinatorics of separated graphs.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--max-vertices", type=int, default=None,
                   help="vertex budget per derived level (default: $SEPGRAPH_MAX_VERTICES or 200000)")
    sub = p.add_subparsers(dest="verb", required=True, metavar="VERB")

    def verb(name, fn, help_text, graph=True, level=False):
        sp = sub.add_parser(name, help=help_text)
        sp.set_defaults(func=fn)
        sp.add_argument("-o", "--output", help="write to this file instead of stdout")
        if graph:
            sp.add_argument("input", help="SGF file or bundled sample name")
        if level:
            sp.add_argument("-n", "--level", type=int, default=0, help="tower level to work on")
        return sp

    verb("validate", cmd_validate, "parse and check an SGF file")
    sp = verb("level", cmd_level, "the level-n graph of the tower", level=True)
    sp.add_argument("--json", action="store_true", help="print counts instead of SGF")
    sp = verb("tower", cmd_tower, "build and export a tower", graph=False)
    sp.add_argument("input", nargs="?", help="SGF file or bundled sample name")
    sp.add_argument("-n", "--level", type=int, required=True)
    sp.add_argument("--out", help="directory for level files and manifest")
    sp.add_argument("--lamplighter", action="store_true", help="use the word-named lamplighter tower")
    verb("hsets", cmd_hsets, "lattice of hereditary saturated sets", level=True)
    for name, fn, text in (("closure", cmd_closure, "hereditary saturated closure of a vertex set"),
                           ("quotient", cmd_quotient, "quotient by a hereditary saturated set")):
        sp = verb(name, fn, text, level=True)
        sp.add_argument("--set", help="comma-separated vertex names")
        sp.add_argument("--set-file", help="VertexSet JSON file")
    sp = verb("k0", cmd_k0, "Grothendieck group of the level-n monoid", level=True)
    sp.add_argument("--presentation", action="store_true", help="include generators and relations")
    sp = verb("balls", cmd_balls, "enumerate n-balls of the configuration space")
    sp.add_argument("-n", "--radius", type=int, required=True)
    sp = verb("recode", cmd_recode, "recode allowed balls from a JSON subshift spec")
    sp.add_argument("-n", type=int, default=1, help="recoding depth")
    sp = verb("represent", cmd_represent, "separated graph of a finite-type subshift spec")
    sp.add_argument("--json", action="store_true", help="print the dictionary instead of SGF")
    sp = verb("classify", cmd_classify, "simplicity classifier")
    sp.add_argument("-N", "--bound", type=int, default=6, help="deepest level searched")
    verb("cantor", cmd_cantor, "dead ends and isolated points")
    verb("prime", cmd_prime, "primeness decision")
    sp = verb("fromwords", cmd_fromwords, "forbidden binary words on the lamplighter tower", graph=False)
    sp.add_argument("--words", required=True, help="comma-separated binary words")
    sp.add_argument("-n", "--level", type=int, default=2)
    sp.add_argument("-N", "--bound", type=int, default=6, help="finite-type search bound")
    sp.add_argument("--quotient", action="store_true", help="print the level-n quotient as SGF")
    verb("dot", cmd_dot, "Graphviz export with group colors", level=True)
    sp = verb("repro", cmd_repro, "run every acceptance check and print a table", graph=False)
    sp.add_argument("--report-dir", help="also write repro.tsv and figures here")
    return p


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code = args.func(args)
    except (SepGraphError, OSError, ValueError, KeyError) as exc:
        sys.stderr.write(_json({"error": type(exc).__name__, "message": str(exc)}))
        return 1
    return code or 0


if __name__ == "__main__":
    sys.exit(main())
