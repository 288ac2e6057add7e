"""Forbidden-subgraph descriptors and (non-induced) subgraph detection."""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Iterable

from .digraph import Digraph, bits

KINDS = ("T", "C", "DK", "X")


@dataclass(frozen=True)
class Pattern:
    """One of ``T:k``, ``C:k``, ``DK:a,b`` or ``X:<digraph literal>``."""

    kind: str
    k: int = 0
    a: int = 0
    b: int = 0
    graph: Digraph | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown pattern kind {self.kind!r}")
        if self.kind == "T" and self.k < 1:
            raise ValueError("T:k needs k >= 1")
        if self.kind == "C" and self.k < 2:
            raise ValueError("C:k needs k >= 2")
        if self.kind == "DK" and (self.a < 1 or self.b < 1):
            raise ValueError("DK:a,b needs a, b >= 1")
        if self.kind == "X" and self.graph is None:
            raise ValueError("X pattern needs a digraph")

    @classmethod
    def trans(cls, k: int) -> "Pattern":
        return cls("T", k=k)

    @classmethod
    def cycle(cls, k: int) -> "Pattern":
        return cls("C", k=k)

    @classmethod
    def bipartite(cls, a: int, b: int) -> "Pattern":
        return cls("DK", a=a, b=b)

    @classmethod
    def explicit(cls, g: Digraph) -> "Pattern":
        return cls("X", graph=g)

    @classmethod
    def parse(cls, text: str) -> "Pattern":
        t = text.strip()
        m = re.fullmatch(r"(T|C):(\d+)", t)
        if m:
            return cls(m.group(1), k=int(m.group(2)))
        m = re.fullmatch(r"DK:(\d+),(\d+)", t)
        if m:
            return cls("DK", a=int(m.group(1)), b=int(m.group(2)))
        if t.startswith("X:"):
            return cls("X", graph=Digraph.from_text(t[2:]))
        raise ValueError(f"bad pattern {text!r} (expected T:<k>, C:<k>, DK:<a>,<b> or X:<digraph>)")

    def __str__(self) -> str:
        if self.kind in ("T", "C"):
            return f"{self.kind}:{self.k}"
        if self.kind == "DK":
            return f"DK:{self.a},{self.b}"
        return f"X:{self.graph.to_text()}"

    @property
    def order(self) -> int:
        if self.kind == "DK":
            return self.a + self.b
        if self.kind == "X":
            return self.graph.n
        return self.k

    def to_digraph(self) -> Digraph:
        return _pattern_graph(self)


@lru_cache(maxsize=None)
def _pattern_graph(p: Pattern) -> Digraph:
    if p.kind == "T":
        return Digraph.from_edges(p.k, [(i, j) for i in range(p.k) for j in range(i + 1, p.k)])
    if p.kind == "C":
        return Digraph.from_edges(p.k, [(i, (i + 1) % p.k) for i in range(p.k)])
    if p.kind == "DK":
        left, right = range(p.a), range(p.a, p.a + p.b)
        return Digraph.from_edges(p.a + p.b, [e for u in left for v in right for e in ((u, v), (v, u))])
    return p.graph


@lru_cache(maxsize=None)
def _search_order(h: Digraph) -> tuple[int, ...]:
    """Vertex order for embedding: greedy, each next vertex maximally tied to earlier ones."""
    order = [max(range(h.n), key=lambda v: bin(h.und[v]).count("1"))]
    placed = 1 << order[0]
    while len(order) < h.n:
        v = max(
            (v for v in range(h.n) if not placed >> v & 1),
            key=lambda v: (bin(h.und[v] & placed).count("1"), bin(h.und[v]).count("1"), -v),
        )
        order.append(v)
        placed |= 1 << v
    return tuple(order)


def _embed(h: Digraph, g: Digraph, order: tuple[int, ...], phi: dict[int, int], used: int) -> bool:
    if len(phi) == h.n:
        return True
    full = (1 << g.n) - 1
    for x in order:
        if x not in phi:
            break
    cand = full & ~used
    for y, img in phi.items():
        if h.out[y] >> x & 1:
            cand &= g.out[img]
        if h.out[x] >> y & 1:
            cand &= g.inn[img]
    for v in bits(cand):
        phi[x] = v
        if _embed(h, g, order, phi, used | (1 << v)):
            del phi[x]
            return True
        del phi[x]
    return False


def contains_subgraph(g: Digraph, h: Digraph, through: tuple[int, int] | None = None) -> bool:
    """True iff g has a subgraph isomorphic to h.

    With ``through=(u, v)`` only copies using the edge u->v are searched;
    the caller is responsible for u->v being an edge of g.
    """
    if h.n > g.n:
        return False
    order = _search_order(h)
    if through is None:
        return _embed(h, g, order, {}, 0)
    u, v = through
    if not g.has_edge(u, v):
        return False
    back = g.has_edge(v, u)
    for x, y in h.edges():
        if h.out[y] >> x & 1 and not back:
            continue  # the seeded pair must also carry h's reverse arc
        if _embed(h, g, order, {x: u, y: v}, (1 << u) | (1 << v)):
            return True
    return False


def _cycle_through(g: Digraph, k: int, u: int, v: int) -> bool:
    # need a path v -> ... -> u on exactly k vertices
    if k == 2:
        return g.has_edge(v, u)

    def walk(x: int, depth: int, used: int) -> bool:
        if depth == k - 1:
            return bool(g.out[x] >> u & 1)
        for y in bits(g.out[x] & ~used):
            if walk(y, depth + 1, used | (1 << y)):
                return True
        return False

    return walk(v, 1, (1 << u) | (1 << v))


def _has_cycle(g: Digraph, k: int) -> bool:
    for u in range(g.n):
        for v in bits(g.out[u]):
            if _cycle_through(g, k, u, v):
                return True
    return False


def _has_trans(g: Digraph, k: int, cand: int) -> bool:
    # T_k = a vertex followed by a T_{k-1} inside its out-neighbourhood
    if k == 0:
        return True
    if bin(cand).count("1") < k:
        return False
    for v in bits(cand):
        if _has_trans(g, k - 1, cand & g.out[v]):
            return True
    return False


def _trans_through(g: Digraph, k: int, u: int, v: int) -> bool:
    # build the chain in order; other vertices sit before u, between u and v, or after v
    out = g.out
    before = g.inn[u] & g.inn[v]
    between = out[u] & g.inn[v]

    def rec(cand: int, stage: int, need: int) -> bool:
        if need == 0:
            return True
        if stage == 2:
            return _has_trans(g, need, cand)
        if bin(cand).count("1") < need:
            return False
        pivot, role = (u, before) if stage == 0 else (v, between)
        if cand >> pivot & 1 and rec(cand & out[pivot], stage + 1, need - 1):
            return True
        for w in bits(cand & role):
            if rec(cand & out[w], stage, need - 1):
                return True
        return False

    return rec((1 << g.n) - 1, 0, k)


def contains_pattern(g: Digraph, p: Pattern, through: tuple[int, int] | None = None) -> bool:
    """True iff g contains p as a (not necessarily induced) subgraph.

    ``through`` restricts the search to copies using the given edge, which
    is how incremental enumeration checks only what a new edge created.
    """
    if p.order > g.n:
        return False
    if p.kind == "C":
        if through is None:
            return _has_cycle(g, p.k)
        u, v = through
        return g.has_edge(u, v) and _cycle_through(g, p.k, u, v)
    if p.kind == "T":
        if through is None:
            return _has_trans(g, p.k, (1 << g.n) - 1)
        if p.k < 2:
            return False
        u, v = through
        return g.has_edge(u, v) and _trans_through(g, p.k, u, v)
    return contains_subgraph(g, p.to_digraph(), through)


def contains_any(g: Digraph, patterns: Iterable[Pattern], through: tuple[int, int] | None = None) -> bool:
    return any(contains_pattern(g, p, through) for p in patterns)


@lru_cache(maxsize=None)
def labelled_copies(h: Digraph, n: int) -> tuple[frozenset[tuple[int, int]], ...]:
    """Distinct edge sets of the copies of h inside the complete digraph on n vertices.

    Sorted for determinism; this is the edge set of the pattern hypergraph.
    """
    if h.n > n:
        return ()
    hedges = h.edges()
    seen = set()
    for img in permutations(range(n), h.n):
        seen.add(frozenset((img[x], img[y]) for x, y in hedges))
    return tuple(sorted(seen, key=lambda s: sorted(s)))
