"""Transitive-optimal orderings, optimal k-partitions and distances to structure families."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Sequence

import numpy as np

from .config import budget
from .digraph import Digraph, bits, popcount
from .errors import BudgetExceeded

_NUMPY_FROM = 13


@dataclass(frozen=True)
class VertexOrdering:
    """``order[i]`` is the vertex at rank i."""

    order: tuple[int, ...]
    backwards: int

    @property
    def sigma(self) -> tuple[int, ...]:
        """Rank of each vertex."""
        rank = [0] * len(self.order)
        for i, v in enumerate(self.order):
            rank[v] = i
        return tuple(rank)


def backwards_count(g: Digraph, order: Sequence[int]) -> int:
    seen = 0
    back = 0
    for v in order:
        back += popcount(g.out[v] & seen)
        seen |= 1 << v
    return back


def _cost_to_go_small(g: Digraph) -> list[int]:
    n = g.n
    full = (1 << n) - 1
    out = g.out
    cost = [0] * (full + 1)
    for S in range(full - 1, -1, -1):
        best = n * n
        free = full & ~S
        while free:
            low = free & -free
            v = low.bit_length() - 1
            c = bin(out[v] & S).count("1") + cost[S | low]
            if c < best:
                best = c
            free ^= low
        cost[S] = best
    return cost


def _cost_to_go_numpy(g: Digraph) -> np.ndarray:
    n = g.n
    full = (1 << n) - 1
    subsets = np.arange(full + 1, dtype=np.int64)
    sizes = np.bitwise_count(subsets)
    cost = np.zeros(full + 1, dtype=np.int32)
    for m in range(n - 1, -1, -1):
        layer = subsets[sizes == m]
        best = np.full(layer.size, np.iinfo(np.int32).max, dtype=np.int32)
        for v in range(n):
            free = ((layer >> v) & 1) == 0
            S = layer[free]
            c = np.bitwise_count(S & g.out[v]).astype(np.int32) + cost[S | (1 << v)]
            best[free] = np.minimum(best[free], c)
        cost[layer] = best
    return cost


def beta(g: Digraph) -> tuple[int, VertexOrdering]:
    """Minimum number of backwards edges over all vertex orderings.

    Subset DP over placed prefixes; the witness is the lexicographically
    smallest optimal vertex sequence.
    """
    limit = budget().fas_n
    if g.n > limit:
        raise BudgetExceeded(f"exact beta limited to n <= {limit}, got n={g.n}")
    cost = _cost_to_go_small(g) if g.n < _NUMPY_FROM else _cost_to_go_numpy(g)
    S, order = 0, []
    for _ in range(g.n):
        for v in range(g.n):
            if S >> v & 1:
                continue
            if popcount(g.out[v] & S) + int(cost[S | 1 << v]) == int(cost[S]):
                order.append(v)
                S |= 1 << v
                break
    b = int(cost[0])
    return b, VertexOrdering(tuple(order), b)


def gamma(g: Digraph) -> int:
    """Number of unordered non-adjacent pairs."""
    return comb(g.n, 2) - sum(popcount(m) for m in g.und) // 2


# -- partitions --------------------------------------------------------------


@dataclass(frozen=True)
class Partition:
    """``classes[v]`` is the class of v; classes beyond the used ones are empty."""

    classes: tuple[int, ...]
    k: int
    non_crossing: int

    def members(self, c: int) -> int:
        return sum(1 << v for v, x in enumerate(self.classes) if x == c)


def non_crossing(g: Digraph, classes: Sequence[int]) -> int:
    """Edges with both ends in one class; a double edge counts twice."""
    return sum(1 for u, v in g.edges() if classes[u] == classes[v])


def make_partition(g: Digraph, classes: Sequence[int], k: int | None = None) -> Partition:
    k = max(classes) + 1 if k is None else k
    if any(not (0 <= c < k) for c in classes) or len(classes) != g.n:
        raise ValueError("class indices must lie in 0..k-1, one per vertex")
    return Partition(tuple(classes), k, non_crossing(g, classes))


def optimal_partition(g: Digraph, k: int) -> tuple[int, Partition]:
    """Fewest non-crossing edges over all k-partitions (exact branch and bound).

    Ties go to the lexicographically least class assignment; vertex 0 is in
    class 0 and classes are opened in order.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    limit = budget().partition_n
    if g.n > limit:
        raise BudgetExceeded(f"exact partition search limited to n <= {limit}, got n={g.n}")
    n = g.n
    out, inn = g.out, g.inn
    masks = [0] * k
    assign = [0] * n
    best = [None, None]

    def cost(v: int, c: int) -> int:
        return popcount(out[v] & masks[c]) + popcount(inn[v] & masks[c])

    def rec(v: int, top: int, cur: int):
        if v == n:
            if best[0] is None or cur < best[0]:
                best[0], best[1] = cur, tuple(assign)
            return
        if best[0] is not None:
            bound = cur + sum(min(cost(w, c) for c in range(k)) for w in range(v, n))
            if bound >= best[0]:
                return
        for c in range(min(top + 1, k - 1) + 1):
            step = cost(v, c)
            assign[v] = c
            masks[c] |= 1 << v
            rec(v + 1, max(top, c), cur + step)
            masks[c] &= ~(1 << v)

    masks[0] = 1
    rec(1, 0, 0)
    value, classes = best
    return value, Partition(classes, k, value)


def degree_into_own_class(g: Digraph, part: Partition) -> list[int]:
    """|N+_{A_i}(x)| + |N-_{A_i}(x)| for each vertex x in class A_i."""
    return [
        popcount(g.out[x] & part.members(part.classes[x])) + popcount(g.inn[x] & part.members(part.classes[x]))
        for x in range(g.n)
    ]


def optimality_local_check(g: Digraph, part: Partition) -> bool:
    """True iff no single-vertex move lowers the non-crossing count."""
    masks = [part.members(c) for c in range(part.k)]
    for x in range(g.n):
        own = part.classes[x]
        here = popcount(g.out[x] & masks[own]) + popcount(g.inn[x] & masks[own])
        for c in range(part.k):
            if c != own and popcount(g.out[x] & masks[c]) + popcount(g.inn[x] & masks[c]) < here:
                return False
    return True


# -- distances ---------------------------------------------------------------

FAMILIES = ("transitive", "tournament", "kpartite", "blowup")


def parse_family_spec(spec: str) -> tuple[str, int]:
    name, _, arg = spec.partition(":")
    if name not in FAMILIES:
        raise ValueError(f"unknown structure family {spec!r}")
    if name == "kpartite":
        if not arg.isdigit() or int(arg) < 1:
            raise ValueError("kpartite needs a class count, e.g. kpartite:2")
        return name, int(arg)
    return name, 0


def pair_edit(s: int, t: int) -> int:
    """Edit cost between two pair states; reversing a single edge costs 1."""
    if {s, t} == {1, 2}:
        return 1
    return popcount(s ^ t)


def blowup_distance(g: Digraph) -> int:
    """Fewest edge deletions making g a subgraph of a transitive-bipartite blow up.

    DP over vertex subsets: f[S] is the cheapest arrangement of S as a
    prefix of parts; appending part P after S pays P's internal cost plus
    every edge from P back into S.
    """
    n = g.n
    full = (1 << n) - 1
    out = g.out
    within = [0] * (full + 1)
    for X in range(1, full + 1):
        low = X & -X
        v = low.bit_length() - 1
        rest = X ^ low
        within[X] = within[rest] + popcount(out[v] & rest) + popcount(g.inn[v] & rest)

    inner = {}
    for X in range(1, full + 1):
        size = popcount(X)
        if size == 1:
            inner[X] = 0
        elif size % 2 == 0:
            members = list(bits(X))
            first, others = members[0], members[1:]
            best = None
            for side in combinations(others, size // 2 - 1):
                A = (1 << first) | sum(1 << v for v in side)
                c = within[A] + within[X ^ A]
                if best is None or c < best:
                    best = c
            inner[X] = best

    f = [0] * (full + 1)
    for S in range(1, full + 1):
        best = None
        P = S
        while P:
            if P in inner:
                R = S ^ P
                c = f[R] + inner[P] + sum(popcount(out[v] & R) for v in bits(P))
                if best is None or c < best:
                    best = c
            P = (P - 1) & S
        f[S] = best
    return f[full]


def distance_to_family(g: Digraph, family: str) -> int:
    """Fewest edge changes (add, delete or reverse, each 1) to land in ``family``.

    ``transitive``: subgraphs of a transitive tournament; ``tournament``: a
    transitive tournament itself; ``kpartite:k``; ``blowup``: subgraphs of a
    transitive-bipartite blow up.
    """
    name, k = parse_family_spec(family)
    limit = budget().distance_n
    if g.n > limit:
        raise BudgetExceeded(f"exact distance limited to n <= {limit}, got n={g.n}")
    if name == "transitive":
        return beta(g)[0]
    if name == "tournament":
        return beta(g)[0] + gamma(g)
    if name == "kpartite":
        return optimal_partition(g, k)[0]
    return blowup_distance(g)
