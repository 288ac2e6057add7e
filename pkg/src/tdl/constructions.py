"""Named digraph constructions and the Turán edge count."""

from __future__ import annotations

import re
from math import comb
from typing import Sequence

from .digraph import Digraph


def balanced_sizes(n: int, k: int) -> list[int]:
    """Class sizes of a balanced k-partition of n vertices, larger classes first."""
    q, r = divmod(n, k)
    return [q + 1] * r + [q] * (k - r)


def turan_edge_count(k: int, n: int) -> int:
    """t_k(n): edges of the complete balanced k-partite graph on n vertices."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return comb(n, 2) - sum(comb(s, 2) for s in balanced_sizes(n, k))


def _classes(sizes: Sequence[int]) -> list[range]:
    out, start = [], 0
    for s in sizes:
        out.append(range(start, start + s))
        start += s
    return out


def turan_digraph(k: int, n: int) -> Digraph:
    """DT_k(n): the balanced complete k-partite graph with every edge doubled.

    Classes are contiguous label blocks, larger classes first.
    """
    if k < 1 or k > n:
        raise ValueError(f"DT_k(n) needs 1 <= k <= n, got k={k}, n={n}")
    return complete_multipartite_digraph(balanced_sizes(n, k))


def complete_multipartite_digraph(sizes: Sequence[int]) -> Digraph:
    if any(s <= 0 for s in sizes):
        raise ValueError("class sizes must be positive")
    classes = _classes(sizes)
    n = sum(sizes)
    edges = [
        (u, v)
        for i, a in enumerate(classes)
        for j, b in enumerate(classes)
        if i != j
        for u in a
        for v in b
    ]
    return Digraph.from_edges(n, edges)


def t_plus(n: int, k: int) -> Digraph:
    """T^+_{n,k}: all i->j for i<j, plus j->i when i and j share a block of k labels."""
    if k < 1 or k > n:
        raise ValueError(f"T+_(n,k) needs 1 <= k <= n, got n={n}, k={k}")
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            edges.append((i, j))
            if i // k == j // k:
                edges.append((j, i))
    return Digraph.from_edges(n, edges)


def transitive_tournament(n: int) -> Digraph:
    return Digraph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def directed_cycle(n: int) -> Digraph:
    if n < 2:
        raise ValueError("a directed cycle needs at least 2 vertices")
    return Digraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_digraph(n: int) -> Digraph:
    return Digraph.from_edges(n, [(i, j) for i in range(n) for j in range(n) if i != j])


def complete_bipartite_digraph(a: int, b: int) -> Digraph:
    """DK_{a,b} with classes {0..a-1} and {a..a+b-1}."""
    return complete_multipartite_digraph([a, b])


def k_arrow(a: int, b: int) -> Digraph:
    """All a*b edges directed from {0..a-1} to {a..a+b-1}."""
    if a <= 0 or b <= 0:
        raise ValueError("both sides must be non-empty")
    return Digraph.from_edges(a + b, [(u, v) for u in range(a) for v in range(a, a + b)])


def blow_up(parts: Sequence[int]) -> Digraph:
    """Transitive-bipartite blow up.

    ``parts`` lists part sizes in order: 1 is a single vertex, an even 2m is a
    DK_{m,m} whose first m labels form one side.  All edges between parts go
    from the earlier part to the later one.
    """
    edges = []
    classes = _classes(parts)
    for size, part in zip(parts, classes):
        if size != 1 and (size <= 0 or size % 2):
            raise ValueError(f"part size must be 1 or a positive even number, got {size}")
        if size > 1:
            m = size // 2
            left, right = part[:m], part[m:]
            edges += [e for u in left for v in right for e in ((u, v), (v, u))]
    for i, a in enumerate(classes):
        for b in classes[i + 1:]:
            edges += [(u, v) for u in a for v in b]
    return Digraph.from_edges(sum(parts), edges)


_SPECS = {
    "DT": (turan_digraph, 2),
    "TP": (t_plus, 2),
    "TT": (transitive_tournament, 1),
    "CYC": (directed_cycle, 1),
    "DKN": (complete_digraph, 1),
    "DK": (complete_bipartite_digraph, 2),
    "KA": (k_arrow, 2),
}


def construct(spec: str) -> Digraph:
    """Build a named digraph from a short spec string.

    ``DT:k,n``, ``TP:n,k``, ``TT:n``, ``CYC:n``, ``DKN:n``, ``DK:a,b``,
    ``KA:a,b`` and ``BU:s1,s2,...`` (blow-up part sizes).
    """
    m = re.fullmatch(r"\s*([A-Z]+):([\d,\s]+)", spec)
    if not m:
        raise ValueError(f"bad construction spec {spec!r}")
    name, args = m.group(1), [int(x) for x in m.group(2).split(",") if x.strip()]
    if name == "BU":
        return blow_up(args)
    if name not in _SPECS:
        raise ValueError(f"unknown construction {name!r}")
    fn, arity = _SPECS[name]
    if len(args) != arity:
        raise ValueError(f"{name} takes {arity} argument(s)")
    return fn(*args)
