"""Dead ends, boundary closures, isolated points, unlinkable pairs and primeness."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

from .bratteli import tower
from .core import SeparatedGraph, SignedEdge, letter_key
from .errors import SizeLimitExceeded
from .subshift import Ball, balls_at

DEFAULT_PAIR_CAP = 2 ** 16
DEFAULT_CONNECTIVITY_LEVELS = 2
DEFAULT_BALL_RADIUS = 4


def _sorted(letters: Iterable[SignedEdge]) -> list:
    return sorted(letters, key=letter_key)


def format_letters(letters: Iterable[SignedEdge]) -> list:
    return [str(s) for s in _sorted(letters)]


def _is_choice_letter(g: SeparatedGraph, s: SignedEdge) -> bool:
    if s.sign < 0:
        return False
    v = g.range[s.edge]
    own = g.group_of[s.edge]
    return any(len(grp.edges) >= 2 and (v, i) != own for i, grp in enumerate(g.groups[v]))


def dead_ends(g: SeparatedGraph) -> frozenset:
    """Signed edges that start no choice path."""
    predecessors: dict = {s: [] for s in g.signed_edges()}
    for s, nxt in g.successors.items():
        for t in nxt:
            predecessors[t].append(s)
    alive = {s for s in predecessors if _is_choice_letter(g, s)}
    queue = deque(alive)
    while queue:
        t = queue.popleft()
        for s in predecessors[t]:
            if s not in alive:
                alive.add(s)
                queue.append(s)
    dead = frozenset(s for s in predecessors if s not in alive)
    assert is_path_closed(g, dead), "dead ends must be path closed"
    return dead


def is_path_closed(g: SeparatedGraph, A: Iterable[SignedEdge]) -> bool:
    A = set(A)
    return all(t in A for s in A for t in g.successors[s])


def _boundary_rules(g: SeparatedGraph, A: set) -> set:
    """Letters forced by the two boundary rules, not yet in A."""
    new = set()
    for v in g.layer1:
        out = g.out_edges[v]
        if len(out) >= 2:
            for e in out:
                if all(SignedEdge(f, 1) in A for f in out if f != e):
                    new.add(SignedEdge(e, -1))
    for v in g.layer0:
        groups = g.groups[v]
        if len(groups) >= 2:
            hit = [any(SignedEdge(e, -1) in A for e in grp.edges) for grp in groups]
            for i, grp in enumerate(groups):
                if all(h for j, h in enumerate(hit) if j != i):
                    new.update(SignedEdge(e, 1) for e in grp.edges)
    return new - A


def boundary_closure(g: SeparatedGraph, A: Iterable[SignedEdge]) -> frozenset:
    """Least path-closed set containing A that is closed under both boundary rules."""
    closed = set(A)
    pending = deque(closed)
    while True:
        while pending:
            s = pending.popleft()
            for t in g.successors[s]:
                if t not in closed:
                    closed.add(t)
                    pending.append(t)
        forced = _boundary_rules(g, closed)
        if not forced:
            return frozenset(closed)
        closed |= forced
        pending.extend(forced)


def V_of(g: SeparatedGraph, A: Iterable[SignedEdge]) -> frozenset:
    bar = boundary_closure(g, A)
    out = set()
    for v in g.layer0:
        if all(any(SignedEdge(e, -1) in bar for e in grp.edges) for grp in g.groups[v]):
            out.add(v)
    for v in g.layer1:
        if all(SignedEdge(e, 1) in bar for e in g.out_edges[v]):
            out.add(v)
    return frozenset(out)


def boundary_ball(g: SeparatedGraph, A: Iterable[SignedEdge], v: str,
                  max_radius: int = DEFAULT_BALL_RADIUS, cap: int = 200_000) -> Optional[Ball]:
    """A ball at v of radius 1..max_radius whose boundary lies in A, found by enumeration."""
    A = frozenset(A)
    for n in range(1, max_radius + 1):
        try:
            candidates = balls_at(g, v, n, cap)
        except SizeLimitExceeded:
            return None
        hits = [b for b in candidates if b.boundary() <= A]
        if hits:
            return min(hits, key=Ball.key)
    return None


@dataclass(frozen=True)
class CantorReport:
    cantor: bool
    dead_ends: frozenset
    isolated_at: frozenset
    witnesses: dict = field(default_factory=dict)  # vertex -> Ball or None

    def to_json(self) -> dict:
        return {
            "cantor": self.cantor,
            "dead_ends": format_letters(self.dead_ends),
            "isolated_at": sorted(self.isolated_at),
            "witnesses": {v: (b.to_json() if b is not None else None)
                          for v, b in sorted(self.witnesses.items())},
        }


def is_cantor(g: SeparatedGraph, max_radius: int = DEFAULT_BALL_RADIUS) -> CantorReport:
    dead = dead_ends(g)
    bad = V_of(g, dead)
    witnesses = {v: boundary_ball(g, dead, v, max_radius) for v in sorted(bad)}
    return CantorReport(not bad, dead, bad, witnesses)


# linking ----------------------------------------------------------------------

def _reach_after(g: SeparatedGraph, starts: Iterable[SignedEdge]) -> set:
    """Letters reachable in one or more admissible steps from any start letter."""
    seen: set = set()
    queue = deque()
    for s in starts:
        for t in g.successors[s]:
            if t not in seen:
                seen.add(t)
                queue.append(t)
    while queue:
        s = queue.popleft()
        for t in g.successors[s]:
            if t not in seen:
                seen.add(t)
                queue.append(t)
    return seen


def linking_relation(g: SeparatedGraph) -> dict:
    """sigma' -> set of sigma such that an admissible path runs from sigma' to sigma^-1."""
    out = {}
    for s in g.signed_edges():
        out[s] = frozenset(t.inverse() for t in _reach_after(g, (s,)))
    return out


def can_be_linked(g: SeparatedGraph, A: Iterable[SignedEdge], B: Iterable[SignedEdge]) -> bool:
    targets = {s.inverse() for s in A}
    return bool(targets & _reach_after(g, B))


@dataclass(frozen=True)
class GaloisPair:
    left: frozenset
    right: frozenset
    stuck: frozenset = frozenset()  # letters linked to nothing, present in every maximal side

    @property
    def core_left(self) -> frozenset:
        return self.left - self.stuck

    @property
    def core_right(self) -> frozenset:
        return self.right - self.stuck

    def to_json(self) -> dict:
        return {"left": format_letters(self.left), "right": format_letters(self.right),
                "core_left": format_letters(self.core_left),
                "core_right": format_letters(self.core_right)}


def stuck_letters(g: SeparatedGraph) -> frozenset:
    """Signed edges after which no letter can follow; they link to nothing."""
    return frozenset(s for s, nxt in g.successors.items() if not nxt)


def maximal_unlinkable_pairs(g: SeparatedGraph, cap: int = DEFAULT_PAIR_CAP,
                             include_degenerate: bool = False) -> list:
    """Maximal unlinkable pairs with both sides nonempty, each unordered pair once.

    A pair is degenerate when one side holds only stuck letters; such pairs
    are skipped unless asked for.
    """
    links = linking_relation(g)
    stuck = stuck_letters(g)
    letters = _sorted(g.signed_edges())
    everything = frozenset(letters)
    free_of = {s: everything - links[s] for s in letters}

    closed = {everything}
    for s in letters:
        closed |= {c & free_of[s] for c in closed}
        if len(closed) > cap:
            raise SizeLimitExceeded(f"more than {cap} closed sets of signed edges")
    seen = set()
    pairs = []
    for right in closed:
        left = frozenset(s for s in letters if right <= free_of[s])
        if not left or not right:
            continue
        if not include_degenerate and (left <= stuck or right <= stuck):
            continue
        key = frozenset((left, right))
        if key in seen:
            continue
        seen.add(key)
        a, b = sorted((left, right), key=lambda x: [letter_key(s) for s in _sorted(x)])
        pairs.append(GaloisPair(a, b, stuck))
    pairs.sort(key=lambda p: ([letter_key(s) for s in _sorted(p.left)],
                              [letter_key(s) for s in _sorted(p.right)]))
    return pairs


def admissibly_connected(g: SeparatedGraph) -> bool:
    """Every two vertices are joined by an admissible path."""
    # concatenation can break admissibility, so reachability is tracked per start letter
    vindex = {v: i for i, v in enumerate(g.vertices)}
    masks = _reach_masks(g, vindex)
    full = (1 << len(vindex)) - 1
    for v in g.vertices:
        m = 1 << vindex[v]
        for s in g.departing[v]:
            m |= masks[s]
        if m != full:
            return False
    return True


def _reach_masks(g: SeparatedGraph, vindex: dict) -> dict:
    """letter -> bitmask of vertices reached by admissible paths starting with it."""
    letters = list(g.successors)
    succ = g.successors
    pred: dict = {s: [] for s in letters}
    for s in letters:
        for t in succ[s]:
            pred[t].append(s)
    # Kosaraju: finishing order on succ, then components on pred
    order, seen = [], set()
    for root in letters:
        if root in seen:
            continue
        seen.add(root)
        stack = [(root, iter(succ[root]))]
        while stack:
            node, it = stack[-1]
            nxt = next((t for t in it if t not in seen), None)
            if nxt is None:
                stack.pop()
                order.append(node)
            else:
                seen.add(nxt)
                stack.append((nxt, iter(succ[nxt])))
    comp: dict = {}
    comps = []
    for root in reversed(order):
        if root in comp:
            continue
        members = [root]
        comp[root] = len(comps)
        i = 0
        while i < len(members):
            for p in pred[members[i]]:
                if p not in comp:
                    comp[p] = len(comps)
                    members.append(p)
            i += 1
        comps.append(members)
    # components come out in topological order of succ; fill masks from sinks upward
    cmask = [0] * len(comps)
    for c in range(len(comps) - 1, -1, -1):
        m = 0
        for s in comps[c]:
            m |= 1 << vindex[g.hat_range(s)]
            for t in succ[s]:
                if comp[t] != c:
                    m |= cmask[comp[t]]
        cmask[c] = m
    return {s: cmask[comp[s]] for s in letters}


def connectivity_profile(g: SeparatedGraph, levels: int = DEFAULT_CONNECTIVITY_LEVELS,
                         max_vertices: Optional[int] = None) -> dict:
    """level -> whether all vertices of that level are admissibly connected."""
    out = {}
    t = tower(g, 0, max_vertices)
    for k in range(levels + 1):
        try:
            t = t.extended(k, max_vertices)
        except SizeLimitExceeded:
            break
        out[k] = admissibly_connected(t.levels[k])
    return out


# verdicts ---------------------------------------------------------------------

@dataclass(frozen=True)
class Prime:
    connectivity: dict
    kind: str = field(default="prime", init=False)

    @property
    def agrees(self) -> bool:
        return all(self.connectivity.values())

    def to_json(self) -> dict:
        return {"verdict": self.kind, "connectivity": {str(k): v for k, v in self.connectivity.items()},
                "connectivity_agrees": self.agrees}


@dataclass(frozen=True)
class NotPrime:
    pair: GaloisPair
    V_left: frozenset
    V_right: frozenset
    V_core_left: frozenset
    V_core_right: frozenset
    connectivity: dict
    kind: str = field(default="not_prime", init=False)

    @property
    def agrees(self) -> bool:
        return not all(self.connectivity.values())

    def to_json(self) -> dict:
        return {"verdict": self.kind, "pair": self.pair.to_json(),
                "V_left": sorted(self.V_left), "V_right": sorted(self.V_right),
                "V_core_left": sorted(self.V_core_left), "V_core_right": sorted(self.V_core_right),
                "connectivity": {str(k): v for k, v in self.connectivity.items()},
                "connectivity_agrees": self.agrees}


@dataclass(frozen=True)
class NotApplicable:
    report: CantorReport
    kind: str = field(default="not_applicable", init=False)

    def to_json(self) -> dict:
        return {"verdict": self.kind, **self.report.to_json()}


PrimeVerdict = Union[Prime, NotPrime, NotApplicable]


def is_prime(g: SeparatedGraph, levels: int = DEFAULT_CONNECTIVITY_LEVELS,
             max_vertices: Optional[int] = None) -> PrimeVerdict:
    report = is_cantor(g)
    if not report.cantor:
        return NotApplicable(report)
    conn = connectivity_profile(g, levels, max_vertices)
    for pair in maximal_unlinkable_pairs(g):
        vl, vr = V_of(g, pair.left), V_of(g, pair.right)
        if vl and vr:
            return NotPrime(pair, vl, vr, V_of(g, pair.core_left), V_of(g, pair.core_right), conn)
    return Prime(conn)
