import json

import pydot
import pytest

from sepgraph import __version__
from sepgraph.cli import main
from sepgraph.core import load
from sepgraph.samples import sample, sample_names


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_level_one_sgf(capsys):
    code, out, _ = run(capsys, "level", "-n", "1", "e23")
    assert code == 0
    assert len(load(out).vertices) == 7


def test_level_json(capsys):
    code, out, _ = run(capsys, "level", "-n", "1", "--json", "e23")
    data = json.loads(out)
    assert data["schema"] == 1 and data["edges"] == 12 and data["group_sizes"] == [2, 2, 2, 3, 3]


def test_prime_verdict(capsys):
    code, out, _ = run(capsys, "prime", "ex9-2")
    assert code == 0 and json.loads(out)["verdict"] == "not_prime"


def test_validate_bad_file(capsys, tmp_path):
    bad = tmp_path / "bad.sgf"
    bad.write_text("vertex a layer=0\nedge e b a\n")
    code, out, err = run(capsys, "validate", str(bad))
    assert code == 1 and out == ""
    assert json.loads(err)["error"] == "UnknownVertex"


def test_missing_file(capsys):
    code, _, err = run(capsys, "validate", "/nonexistent/x.sgf")
    assert code == 1 and "error" in json.loads(err)


def test_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bogus"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["balls", "e23"])
    assert exc.value.code == 2


def test_version(capsys):
    with pytest.raises(SystemExit):
        main(["--version"])
    assert __version__ in capsys.readouterr().out


def test_validate_from_path(capsys, tmp_path):
    p = tmp_path / "g.sgf"
    p.write_text("vertex a layer=0\nvertex b layer=1\n")
    code, out, _ = run(capsys, "validate", str(p))
    data = json.loads(out)
    assert code == 0 and data["valid"] and data["warnings"] == ["layer-1 vertex 'b' has no outgoing edges"]


VERBS = [
    ("validate", "e23"),
    ("level", "-n", "2", "e22"),
    ("tower", "-n", "3", "--lamplighter"),
    ("hsets", "-n", "1", "e22"),
    ("closure", "-n", "1", "--set", "v[a1|b2]", "e22"),
    ("quotient", "-n", "1", "--set", "v[a1|b2],v[a2|b1]", "e22"),
    ("k0", "-n", "1", "--presentation", "e23"),
    ("balls", "-n", "1", "e23"),
    ("classify", "two-cycle"),
    ("cantor", "single-edge"),
    ("prime", "ex9-3"),
    ("fromwords", "--words", "010", "-n", "2"),
    ("fromwords", "--words", "00,11", "-n", "1", "--quotient"),
    ("dot", "e23"),
]


@pytest.mark.parametrize("argv", VERBS, ids=lambda a: " ".join(a))
def test_verbs_are_deterministic(capsys, argv):
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first[0] == 0 and first == second


def test_output_file(capsys, tmp_path):
    out = tmp_path / "o.json"
    code, stdout, _ = run(capsys, "cantor", "e23", "-o", str(out))
    assert code == 0 and stdout == ""
    assert json.loads(out.read_text())["cantor"] is True


def test_quotient_output(capsys):
    _, out, _ = run(capsys, "quotient", "-n", "1", "--set", "v[a1|b2],v[a2|b1]", "e22")
    g = load(out)
    assert len(g.vertices) == 3 and g.group_sizes() == [1, 1, 1, 1]


def test_closure_set_file(capsys, tmp_path):
    f = tmp_path / "h.json"
    f.write_text(json.dumps({"level": 1, "vertices": ["v[a1|b1]", "v[a1|b2]"]}))
    _, out, _ = run(capsys, "closure", "-n", "1", "--set-file", str(f), "e22")
    assert len(json.loads(out)["closure"]["vertices"]) == 5


def test_closure_of_unknown_vertex(capsys):
    code, _, err = run(capsys, "closure", "--set", "zz", "e22")
    assert code == 1 and json.loads(err)["error"] == "UnknownVertex"


def test_tower_export(capsys, tmp_path):
    code, out, _ = run(capsys, "tower", "-n", "2", "e23", "--out", str(tmp_path / "t"))
    assert code == 0 and json.loads(out)["layer_sizes"] == [[1, 1], [1, 6], [6, 72]]
    assert (tmp_path / "t" / "manifest.json").exists()


def test_budget_error(capsys):
    code, _, err = run(capsys, "--max-vertices", "5", "level", "-n", "2", "e23")
    assert code == 1 and json.loads(err)["error"] == "SizeLimitExceeded"


def test_fromwords_even_shift(capsys):
    words = ",".join(sorted(__import__("sepgraph.wordshift").wordshift.even_shift_family(11)))
    _, out, _ = run(capsys, "fromwords", "--words", words, "-n", "2", "-N", "8")
    data = json.loads(out)
    assert data["hset"]["vertices"] == ["010"] and data["finite_type"] == "unknown_up_to_8"


def worked_spec(tmp_path):
    spec = {"alphabet": ["a", "b"], "radius": 1,
            "allowed": [{"words": ["", "a", "a~", "b", "b~"]}, {"words": ["", "a", "a~", "b"]}]}
    p = tmp_path / "spec.json"
    p.write_text(json.dumps(spec))
    return p


def test_represent(capsys, tmp_path):
    p = worked_spec(tmp_path)
    _, out, _ = run(capsys, "represent", "--json", str(p))
    data = json.loads(out)
    assert (data["layer0"], data["layer1"], data["edges"]) == (2, 6, 12)
    _, out, _ = run(capsys, "represent", str(p))
    assert len(load(out).edges) == 12


def test_recode(capsys, tmp_path):
    spec = {"alphabet": ["a"], "radius": 2, "forbidden": [{"words": ["", "a", "a a"]}]}
    p = tmp_path / "spec.json"
    p.write_text(json.dumps(spec))
    code, out, _ = run(capsys, "recode", "-n", "1", str(p))
    data = json.loads(out)
    assert code == 0 and all(b["recoded"]["radius"] == 1 for b in data["balls"])


@pytest.mark.parametrize("name", sample_names())
def test_dot_parses(capsys, name):
    _, out, _ = run(capsys, "dot", name)
    (graph,) = pydot.graph_from_dot_data(out)
    g = sample(name)
    assert len(graph.get_edges()) == len(g.edges)
    colors = {e.get("color") for e in graph.get_edges()}
    assert len(colors) == max((len(gs) for gs in g.groups.values() if gs), default=0)


def test_repro_report(capsys, tmp_path, monkeypatch):
    import sepgraph.repro as repro

    fast = [c for c in repro.CHECKS if c[0] in (1, 2, 4)]
    monkeypatch.setattr(repro, "CHECKS", fast)
    code, out, _ = run(capsys, "repro", "--report-dir", str(tmp_path / "rep"))
    rows = [line.split("\t") for line in out.strip().splitlines()]
    assert code == 0 and rows[0][:3] == ["criterion", "title", "status"]
    assert [r[2] for r in rows[1:]] == ["PASS"] * 3
    for f in ("repro.tsv", "lamplighter_sizes.png", "e23_level1.png", "orbit_0110_quotient.png"):
        assert (tmp_path / "rep" / f).stat().st_size > 0
