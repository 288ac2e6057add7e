"""Vectorised evaluation over blocks of labelled graphs.

A block is a contiguous range of enumeration codes.  A code writes one
pair state per unordered pair in radix 3 (oriented) or 4 (digraph), first
pair most significant, so a fixed code prefix is a fixed assignment of the
first pairs.  Arrays are laid out with the graph axis last.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, permutations

import numpy as np

from .digraph import Digraph, Family, pairs
from .patterns import Pattern, labelled_copies

BATCH_MAX_N = 8


def space_size(n: int, family: Family) -> int:
    return family.base ** (n * (n - 1) // 2)


def decode(n: int, family: Family, codes: np.ndarray) -> np.ndarray:
    """Pair states, shape (P, B), int8."""
    P = n * (n - 1) // 2
    base = family.base
    codes = np.asarray(codes, dtype=np.int64)
    digits = np.empty((P, codes.size), dtype=np.int8)
    rest = codes.copy()
    for p in range(P - 1, -1, -1):
        digits[p] = rest % base
        rest //= base
    return digits


def encode(n: int, family: Family, digits: np.ndarray) -> np.ndarray:
    base = family.base
    codes = np.zeros(digits.shape[1], dtype=np.int64)
    for p in range(digits.shape[0]):
        codes = codes * base + digits[p]
    return codes


def arcs_from_digits(n: int, digits: np.ndarray) -> np.ndarray:
    """Arc indicator, shape (n, n, B), bool."""
    B = digits.shape[1]
    arcs = np.zeros((n, n, B), dtype=bool)
    for p, (u, v) in enumerate(pairs(n)):
        arcs[u, v] = (digits[p] & 1).astype(bool)
        arcs[v, u] = (digits[p] & 2).astype(bool)
    return arcs


def arcs_from_graphs(graphs: list[Digraph]) -> np.ndarray:
    n = graphs[0].n
    arcs = np.zeros((n, n, len(graphs)), dtype=bool)
    for b, g in enumerate(graphs):
        for u, v in g.edges():
            arcs[u, v, b] = True
    return arcs


def digits_from_graphs(graphs: list[Digraph]) -> np.ndarray:
    return np.array([g.pair_states() for g in graphs], dtype=np.int8).T.copy()


def graph_from_arcs(arcs: np.ndarray, b: int) -> Digraph:
    n = arcs.shape[0]
    return Digraph.from_edges(n, [(u, v) for u in range(n) for v in range(n) if arcs[u, v, b]])


def out_masks(arcs: np.ndarray) -> np.ndarray:
    n = arcs.shape[0]
    weights = (1 << np.arange(n, dtype=np.uint16))[:, None]
    return np.stack([(arcs[u].astype(np.uint16) * weights).sum(axis=0, dtype=np.uint16) for u in range(n)])


def in_masks(arcs: np.ndarray) -> np.ndarray:
    return out_masks(arcs.transpose(1, 0, 2))


def contains(arcs: np.ndarray, pattern: Pattern) -> np.ndarray:
    """Per-graph containment of ``pattern`` (OR over all labelled copies)."""
    n, B = arcs.shape[0], arcs.shape[2]
    found = np.zeros(B, dtype=bool)
    for copy in labelled_copies(pattern.to_digraph(), n):
        hit = np.ones(B, dtype=bool)
        for u, v in copy:
            hit &= arcs[u, v]
        found |= hit
    return found


def contains_any(arcs: np.ndarray, patterns) -> np.ndarray:
    found = np.zeros(arcs.shape[2], dtype=bool)
    for p in patterns:
        found |= contains(arcs, p)
    return found


def pair_weights(n: int, arcs: np.ndarray) -> np.ndarray:
    """Number of arcs on each unordered pair (0, 1 or 2), shape (P, B)."""
    return np.stack([arcs[u, v].astype(np.int8) + arcs[v, u] for u, v in pairs(n)]) if n > 1 else np.zeros((0, arcs.shape[2]), np.int8)


def weighted_sizes(n: int, arcs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    w = pair_weights(n, arcs)
    return (w == 1).sum(axis=0), (w == 2).sum(axis=0)


def gamma(n: int, arcs: np.ndarray) -> np.ndarray:
    return (pair_weights(n, arcs) == 0).sum(axis=0)


@lru_cache(maxsize=None)
def restricted_growth(n: int, k: int) -> tuple[tuple[int, ...], ...]:
    """Class assignments with vertex 0 in class 0 and classes opened in order."""
    out = []

    def rec(prefix: list[int], top: int):
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        for c in range(min(top + 1, k - 1) + 1):
            prefix.append(c)
            rec(prefix, max(top, c))
            prefix.pop()

    rec([0], 0)
    return tuple(out)


def min_noncrossing(n: int, arcs: np.ndarray, k: int) -> np.ndarray:
    """Minimum number of within-class arcs over all k-partitions."""
    if k >= n:
        return np.zeros(arcs.shape[2], dtype=np.int64)
    assignments = restricted_growth(n, k)
    inside = np.array(
        [[a[u] == a[v] for u, v in pairs(n)] for a in assignments], dtype=np.float32
    )
    w = pair_weights(n, arcs).astype(np.float32)
    return (inside @ w).min(axis=0).astype(np.int64)


def _popcounts(n: int) -> np.ndarray:
    return np.array([bin(s).count("1") for s in range(1 << n)], dtype=np.int8)


def beta_table(n: int, outm: np.ndarray) -> np.ndarray:
    """Cost-to-go table: g[S] = fewest backwards edges when S is placed first.

    Placing v right after S makes every edge v->S backwards.
    """
    full = (1 << n) - 1
    B = outm.shape[1]
    pc = _popcounts(n)
    g = np.zeros((1 << n, B), dtype=np.int16)
    for S in range(full - 1, -1, -1):
        best = None
        for v in range(n):
            if S >> v & 1:
                continue
            c = pc[outm[v] & S] + g[S | 1 << v]
            best = c if best is None else np.minimum(best, c)
        g[S] = best
    return g


def beta(n: int, arcs: np.ndarray) -> np.ndarray:
    if n == 1:
        return np.zeros(arcs.shape[2], dtype=np.int64)
    return beta_table(n, out_masks(arcs))[0].astype(np.int64)


def lex_optimal_orders(n: int, arcs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Lexicographically smallest transitive-optimal vertex sequence per graph.

    Returns (beta, orders) with orders of shape (n, B).
    """
    outm = out_masks(arcs)
    B = outm.shape[1]
    g = beta_table(n, outm)
    pc = _popcounts(n)
    cols = np.arange(B)
    S = np.zeros(B, dtype=np.int64)
    orders = np.zeros((n, B), dtype=np.int8)
    for step in range(n):
        chosen = np.full(B, -1, dtype=np.int64)
        here = g[S, cols]
        for v in range(n):
            free = ((S >> v) & 1) == 0
            nxt = S | (1 << v)
            ok = free & (chosen < 0) & (pc[outm[v] & S] + g[nxt, cols] == here)
            chosen[ok] = v
        orders[step] = chosen
        S |= 1 << chosen
    return g[0].astype(np.int64), orders


def lex_topological_orders(n: int, arcs: np.ndarray, largest: bool = False) -> np.ndarray:
    """Lexicographically smallest (or, with ``largest``, greatest-first)
    topological order; -1 columns where cyclic."""
    inm = in_masks(arcs).astype(np.int64)
    B = arcs.shape[2]
    placed = np.zeros(B, dtype=np.int64)
    orders = np.full((n, B), -1, dtype=np.int8)
    alive = np.ones(B, dtype=bool)
    for step in range(n):
        chosen = np.full(B, -1, dtype=np.int64)
        for v in (range(n - 1, -1, -1) if largest else range(n)):
            ok = (chosen < 0) & (((placed >> v) & 1) == 0) & ((inm[v] & ~placed) == 0)
            chosen[ok] = v
        alive &= chosen >= 0
        orders[step] = np.where(alive, chosen, -1)
        placed |= np.where(chosen >= 0, 1 << np.maximum(chosen, 0), 0)
    orders[:, ~alive] = -1
    return orders


def codes_from_arcs(n: int, family, arcs: np.ndarray) -> np.ndarray:
    P = pairs(n)
    digits = np.stack([arcs[u, v].astype(np.int8) + 2 * arcs[v, u].astype(np.int8) for u, v in P]) if P else \
        np.zeros((0, arcs.shape[2]), np.int8)
    return encode(n, family, digits)


def acyclic(n: int, arcs: np.ndarray) -> np.ndarray:
    return lex_topological_orders(n, arcs)[0] >= 0 if n > 0 else np.ones(arcs.shape[2], bool)


def induced_cycle4_count(n: int, arcs: np.ndarray) -> np.ndarray:
    """Number of 4-sets inducing exactly a directed 4-cycle."""
    B = arcs.shape[2]
    total = np.zeros(B, dtype=np.int64)
    for quad in combinations(range(n), 4):
        a = quad[0]
        inner = [(u, v) for u in quad for v in quad if u != v]
        for rest in permutations(quad[1:]):
            cyc = (a,) + rest
            cyc_arcs = {(cyc[i], cyc[(i + 1) % 4]) for i in range(4)}
            hit = np.ones(B, dtype=bool)
            for u, v in inner:
                hit &= arcs[u, v] if (u, v) in cyc_arcs else ~arcs[u, v]
            total += hit
    return total

