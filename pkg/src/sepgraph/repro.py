"""Reproduction harness: one check per acceptance criterion, each with its own oracle."""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass
from typing import Callable

from .bratteli import grothendieck, monoid_presentation, one_graph, tower
from .classify import FreeGroup, GraphAlgebra, NotSimple, _cycle_key, classify_simplicity, simple_cycles
from .core import SeparatedGraph, SignedEdge
from .errors import SizeLimitExceeded
from .generators import random_matrix, random_separated_graph
from .hereditary import Closure, enumerate_hsets, lift_one_level, quotient_graph
from .intlinalg import cokernel
from .prime import NotPrime, Prime, V_of, boundary_closure, is_cantor, is_prime, maximal_unlinkable_pairs
from .samples import sample, sample_names
from .subshift import Ball, BallDictionary, enumerate_balls, represent_finite_type, represent_one_step
from .wordshift import (UnknownUpTo, even_shift_family, finite_type_detect, forbidden_to_hset,
                        lamplighter_tower, periodic_orbit_family, word_quotient)

BALL_CORPUS_BUDGET = 20_000


@dataclass(frozen=True)
class CheckResult:
    number: int
    title: str
    passed: bool
    detail: str
    seconds: float


def w(i: int, j: int) -> str:
    """Level-1 vertex of E(m, n) choosing a_i and b_j."""
    return f"v[a{i}|b{j}]"


def _timed(limit: float, fn: Callable[[], tuple]) -> tuple:
    start = time.perf_counter()
    ok, detail = fn()
    elapsed = time.perf_counter() - start
    if limit and elapsed >= limit:
        return False, f"{detail}; took {elapsed:.2f}s, limit {limit}s", elapsed
    return ok, detail, elapsed


# 1 ---------------------------------------------------------------------------

def check_level_counts() -> tuple:
    g1 = one_graph(sample("e23"))
    got = (len(g1.layer0), len(g1.layer1), len(g1.edges), sorted(g1.group_sizes()))
    want = (1, 6, 12, [2, 2, 2, 3, 3])
    return got == want, f"layer0={got[0]} layer1={got[1]} edges={got[2]} groups={got[3]}"


# 2 ---------------------------------------------------------------------------

def check_lamplighter_sizes(n: int = 8) -> tuple:
    t = lamplighter_tower(n)
    sizes = t.layer_sizes()
    ok = all(a == 2 ** k and b == 2 ** (k + 1) for k, (a, b) in enumerate(sizes))
    return ok, "layer sizes " + " ".join(f"{a}/{b}" for a, b in sizes)


# 3 ---------------------------------------------------------------------------

def ball_bijection_corpus(max_edges: int = 6, radius: int = 3) -> list:
    """(name, radius, balls, vertices, equal) over bundled graphs small enough to finish."""
    rows = []
    for name in sample_names():
        g = sample(name)
        if len(g.edges) > max_edges:
            continue
        try:
            t = tower(g, radius, BALL_CORPUS_BUDGET)
        except SizeLimitExceeded:
            continue
        book = BallDictionary(t)
        for n in range(radius + 1):
            level = t.levels[n]
            balls = set(enumerate_balls(g, n))
            images = {book.vertex_ball(v, n) for v in level.vertices}
            rows.append((name, n, len(balls), len(level.vertices), balls == images))
    return rows


def check_ball_bijection() -> tuple:
    rows = ball_bijection_corpus()
    graphs = {r[0] for r in rows}
    ok = len(graphs) >= 10 and all(r[2] == r[3] and r[4] for r in rows)
    bad = [f"{r[0]}@{r[1]}" for r in rows if not (r[2] == r[3] and r[4])]
    return ok, f"{len(graphs)} graphs, {len(rows)} (graph, n) cases" + (f"; mismatches {bad}" if bad else "")


# 4 ---------------------------------------------------------------------------

def check_lattices() -> tuple:
    trivial = enumerate_hsets(sample("e23")).is_trivial()
    m22 = enumerate_hsets(one_graph(sample("e22"))).maximal_proper()
    m23 = enumerate_hsets(one_graph(sample("e23"))).maximal_proper()
    h22 = frozenset({w(1, 2), w(2, 1)})
    h23 = frozenset({w(2, 1), w(3, 1), w(1, 2)})
    ok = trivial and h22 in m22 and h23 in m23
    return ok, (f"E(2,3) trivial={trivial}; E(2,2)_1 has {len(m22)} maximal, target present={h22 in m22}; "
                f"E(2,3)_1 has {len(m23)} maximal, target present={h23 in m23}")


# 5 ---------------------------------------------------------------------------

def distinct_cycles(g: SeparatedGraph, base: str) -> set:
    return {_cycle_key(g, c) for v, c in simple_cycles(g) if v == base}


def check_quotients() -> tuple:
    g1 = one_graph(sample("e22"))
    q = quotient_graph(g1, {w(1, 2), w(2, 1)})
    sizes = sorted(q.group_sizes())
    base = q.layer0[0]
    cycles = distinct_cycles(q, base)
    first = (len(q.vertices) == 3 and len(q.edges) == 4 and sizes == [1, 1, 1, 1] and len(cycles) == 2)

    lq = word_quotient(periodic_orbit_family("0110"), 3)
    loops = {_cycle_key(lq, c) for _, c in simple_cycles(lq)}
    loop = next(iter(loops)) if len(loops) == 1 else ()
    through = {lq.hat_range(s) for s in loop}
    second = (len(lq.vertices) == 8 and len(loops) == 1 and through == set(lq.vertices)
              and len(through & set(lq.layer0)) == 4)
    return first and second, (
        f"E(2,2)_1 quotient: {len(q.vertices)} vertices, {len(q.edges)} edges, group sizes {sizes}, "
        f"{len(cycles)} cycles at {base}; 0110 quotient: {len(lq.vertices)} vertices, "
        f"{len(loops)} cycle of {len(loop)} edges through {len(through & set(lq.layer0))} layer-0 vertices")


# 6 ---------------------------------------------------------------------------

def commuting_square_cases() -> list:
    rows = []
    for name in sample_names():
        g = sample(name)
        g1, naming = tower(g, 1).levels[1], tower(g, 1).namings[0]
        for H in enumerate_hsets(g).elements:
            left = one_graph(quotient_graph(g, H))
            H1 = lift_one_level(g, H, (g1, naming)).vertices
            right = quotient_graph(g1, H1)
            rows.append((name, sorted(H), left == right))
    return rows


def check_commuting_square() -> tuple:
    rows = commuting_square_cases()
    bad = [(r[0], r[1]) for r in rows if not r[2]]
    return not bad, f"{len(rows)} (graph, H) cases" + (f"; failures {bad[:3]}" if bad else "")


# 7 ---------------------------------------------------------------------------

def letters(text: str) -> frozenset:
    return frozenset(SignedEdge.parse(t) for t in text.split())


def check_primeness() -> tuple:
    e23 = sample("e23")
    ex2 = sample("ex9-2")
    ex3 = sample("ex9-3")
    one = is_cantor(e23).cantor and isinstance(is_prime(e23), Prime)

    witness = letters("x1~ x2~ y1 y2 y3")
    v2 = is_prime(ex2)
    two = (is_cantor(ex2).cantor and isinstance(v2, NotPrime)
           and v2.pair.core_left == witness and V_of(ex2, witness) == frozenset({"3"}))

    pairs = maximal_unlinkable_pairs(ex3)
    target = letters("x1 x2 x3 y1~ y2~ y3~")
    three = (is_cantor(ex3).cantor and isinstance(is_prime(ex3), Prime) and len(pairs) == 1
             and pairs[0].left == pairs[0].right == target and not V_of(ex3, target))
    return one and two and three, f"e23 ok={one}; ex9-2 ok={two}; ex9-3 ok={three} ({len(pairs)} pair)"


# 8 ---------------------------------------------------------------------------

def worked_subshift():
    """The two allowed 1-balls over {a, b}: u sees every letter, v sees all but b^-1."""
    a, A, b, B = (SignedEdge("a", 1), SignedEdge("a", -1), SignedEdge("b", 1), SignedEdge("b", -1))
    u = Ball(1, {(), (a,), (A,), (b,), (B,)})
    v = Ball(1, {(), (a,), (A,), (b,)})
    return u, v


def worked_expected_groups() -> dict:
    """Expected group contents, with u and v written as the ball names B1 and B0."""
    def sym(t, c, s, sign):
        return f"[{t}<{c}|{s}]{sign}"
    U, V = "B1", "B0"
    return {
        (U, "a"): {sym(U, "a", U, "-"), sym(V, "a", U, "-")},
        (U, "a~"): {sym(U, "a", U, "+"), sym(U, "a", V, "+")},
        (U, "b"): {sym(U, "b", U, "-")},
        (U, "b~"): {sym(U, "b", U, "+"), sym(U, "b", V, "+")},
        (V, "a"): {sym(U, "a", V, "-"), sym(V, "a", V, "-")},
        (V, "a~"): {sym(V, "a", U, "+"), sym(V, "a", V, "+")},
        (V, "b"): {sym(U, "b", V, "-")},
    }


def check_worked_subshift() -> tuple:
    u, v = worked_subshift()
    rep = represent_one_step(["a", "b"], [u, v])
    g = rep.graph
    names = {str(b): k for k, b in rep.balls.items()}
    got = {(x, grp.name): set(grp.edges) for x in g.layer0 for grp in g.groups[x]}
    counts = (len(g.layer0), len(g.layer1), len(g.edges),
              len(g.groups[names[str(u)]]), len(g.groups[names[str(v)]]))
    ok = counts == (2, 6, 12, 4, 3) and got == worked_expected_groups() and names[str(u)] == "B1"
    return ok, f"|E00|,|E01|,|E1|,|C_u|,|C_v| = {counts}; groups match={got == worked_expected_groups()}"


# 9 ---------------------------------------------------------------------------

def check_full_shift() -> tuple:
    rep = represent_finite_type(["a", "b"], 1, [])
    g = rep.graph
    n00, n01, n1 = len(g.layer0), len(g.layer1), len(g.edges)
    claimed_v, claimed_e = 4 * (2 ** 4 + 2 ** 2), 8 * 2 ** 4
    consistent = n1 == 2 * n01 and n00 == 16 and all(len(grp.edges) >= 1 for x in g.layer0 for grp in g.groups[x])
    match = (n00 + n01, n1) == (claimed_v, claimed_e)
    return consistent, (f"enumerated |E0|={n00 + n01} ({n00}+{n01}), |E1|={n1}; formula gives {claimed_v}, "
                        f"{claimed_e}: {'match' if match else 'mismatch'}")


# 10 --------------------------------------------------------------------------

def check_even_shift(N: int = 8) -> tuple:
    h2 = forbidden_to_hset(even_shift_family(N + 3), 2).vertices
    verdict = finite_type_detect(even_shift_family(N + 3), N)
    ok = h2 == frozenset({"010"}) and verdict == UnknownUpTo(N)
    return ok, f"H^(2)={sorted(h2)}; detect={verdict}"


def even_shift_claim(i: int) -> frozenset:
    """The stated level-2i part: 0 1^(2i-1) 0 plus words of length 2i, 2i+1 with a shorter block."""
    shorter = ["0" + "1" * (2 * j - 1) + "0" for j in range(1, i)]
    words = ["".join(p) for n in (2 * i, 2 * i + 1) for p in itertools.product("01", repeat=n)]
    return frozenset({"0" + "1" * (2 * i - 1) + "0"} | {x for x in words if any(s in x for s in shorter)})


def even_shift_levels(i_max: int = 4) -> dict:
    family = even_shift_family(2 * i_max + 3)
    return {i: forbidden_to_hset(family, 2 * i).vertices == even_shift_claim(i) for i in range(1, i_max + 1)}


# 11 --------------------------------------------------------------------------

def closure_law_violations(cases: int = 1000, seed: int = 0) -> tuple:
    rng = random.Random(seed)
    hs_bad = 0
    for _ in range(cases):
        g = random_separated_graph(rng)
        close = Closure(g)
        verts = list(g.vertices)
        A = frozenset(rng.sample(verts, rng.randint(0, len(verts))))
        B = A | frozenset(rng.sample(verts, rng.randint(0, len(verts))))
        cA, cB = close(A), close(B)
        if not (A <= cA and cA <= cB and close(cA) == cA):
            hs_bad += 1
    bd_bad = 0
    for _ in range(cases):
        g = random_separated_graph(rng)
        sig = list(g.signed_edges())
        A = frozenset(rng.sample(sig, rng.randint(0, len(sig))))
        B = A | frozenset(rng.sample(sig, rng.randint(0, len(sig))))
        cA, cB = boundary_closure(g, A), boundary_closure(g, B)
        if not (A <= cA and cA <= cB and boundary_closure(g, cA) == cA):
            bd_bad += 1
    return hs_bad, bd_bad


def check_closure_laws() -> tuple:
    hs_bad, bd_bad = closure_law_violations()
    return hs_bad == 0 and bd_bad == 0, f"hereditary closure violations {hs_bad}/1000; boundary closure {bd_bad}/1000"


# 12 --------------------------------------------------------------------------

def bareiss_det(m: list) -> int:
    a = [row[:] for row in m]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


def determinantal_factors(m: list) -> list:
    """Invariant factors from gcds of k x k minors."""
    rows, cols = len(m), len(m[0]) if m else 0
    divisors = [1]
    for k in range(1, min(rows, cols) + 1):
        d = 0
        for ri in itertools.combinations(range(rows), k):
            for ci in itertools.combinations(range(cols), k):
                d = math.gcd(d, bareiss_det([[m[i][j] for j in ci] for i in ri]))
                if d == 1:
                    break
            if d == 1:
                break
        if d == 0:
            break
        divisors.append(d)
    return [divisors[k] // divisors[k - 1] for k in range(1, len(divisors))]


def trivially_separated_stable(g: SeparatedGraph, levels: int = 2) -> bool:
    t = tower(g, levels)
    groups = [grothendieck(monoid_presentation(t, n)) for n in range(levels + 1)]
    return all(x == groups[0] for x in groups)


def check_grothendieck(cases: int = 100, seed: int = 1) -> tuple:
    rng = random.Random(seed)
    bad = 0
    for _ in range(cases):
        m = random_matrix(rng)
        want = determinantal_factors(m)
        rank, torsion = cokernel(m, len(m[0]))
        if rank != len(m[0]) - len(want) or torsion != [d for d in want if d > 1]:
            bad += 1
    e23 = grothendieck(monoid_presentation(sample("e23")))
    trivial_group = e23.free_rank == 0 and not e23.torsion
    stable = [trivially_separated_stable(sample(n)) for n in ("trivial-fan", "trivial-square")]
    rng = random.Random(seed + 1)
    randoms = [trivially_separated_stable(random_separated_graph(rng, trivial=True, no_isolated=True))
               for _ in range(20)]
    ok = bad == 0 and trivial_group and all(stable) and all(randoms)
    return ok, (f"{bad}/{cases} oracle mismatches; E(2,3) group {e23.free_rank}/{e23.torsion}; "
                f"level-stable trivially separated: {sum(stable) + sum(randoms)}/{len(stable) + len(randoms)}")


# 13 --------------------------------------------------------------------------

def check_classifier() -> tuple:
    v1 = classify_simplicity(sample("e23"))
    target = frozenset({w(2, 1), w(3, 1), w(1, 2)})
    one = isinstance(v1, NotSimple) and v1.level == 1 and target in v1.maximal and v1.witness in v1.maximal
    v2 = classify_simplicity(sample("two-cycle"))
    two = isinstance(v2, FreeGroup) and v2.rank == 1
    v3 = classify_simplicity(sample("e12"))
    three = isinstance(v3, GraphAlgebra) and enumerate_hsets(v3.graph.incidence()).is_trivial()
    return one and two and three, f"E(2,3): {v1.kind}; two-cycle: {v2.kind}; E(1,2): {v3.kind}"


CHECKS = [
    (1, "E(2,3) level-1 counts", check_level_counts, 1.0),
    (2, "lamplighter tower sizes", check_lamplighter_sizes, 5.0),
    (3, "ball/vertex bijection", check_ball_bijection, 60.0),
    (4, "hereditary lattices", check_lattices, 0),
    (5, "quotients", check_quotients, 0),
    (6, "commuting square", check_commuting_square, 0),
    (7, "primeness and Cantor", check_primeness, 0),
    (8, "worked subshift representation", check_worked_subshift, 0),
    (9, "full shift representation", check_full_shift, 0),
    (10, "even shift", check_even_shift, 0),
    (11, "closure laws", check_closure_laws, 0),
    (12, "Grothendieck groups", check_grothendieck, 0),
    (13, "simplicity classifier", check_classifier, 10.0),
]


def run_check(number: int) -> CheckResult:
    num, title, fn, limit = next(c for c in CHECKS if c[0] == number)
    try:
        ok, detail, elapsed = _timed(limit, fn)
    except Exception as exc:  # a crash is a failed criterion, reported as such
        return CheckResult(num, title, False, f"{type(exc).__name__}: {exc}", 0.0)
    return CheckResult(num, title, ok, detail, elapsed)


def run_all() -> list:
    return [run_check(c[0]) for c in CHECKS]
