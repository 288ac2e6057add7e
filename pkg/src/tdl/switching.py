"""Flippable sets and the double counting between acyclic graphs and their flips."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb

import numpy as np

from . import batch
from .config import budget
from .digraph import Digraph, Family, pairs
from .errors import BudgetExceeded
from .order import beta
from .patterns import Pattern


@dataclass(frozen=True)
class FlippableSet:
    vertices: tuple[int, ...]  # in rank order
    position: int  # rank of the first vertex


def set_size(k: int) -> int:
    """4-sets (to 4-cycles) when the forbidden cycle is C_3, 3-sets (to triangles) above."""
    if k < 3:
        raise ValueError("switching is defined for C_k with k >= 3")
    return 4 if k == 3 else 3


def preimage_factor(k: int) -> int:
    """Per flipped set: cyclic-order-respecting orderings times transitive configurations."""
    return 2 ** 8 if k == 3 else 2 ** 5


def flippable_sets(g: Digraph, k: int = 3) -> list[FlippableSet]:
    """Rank-aligned blocks of consecutive vertices in the fixed transitive-optimal order."""
    b, ordering = beta(g)
    if b != 0:
        raise ValueError(f"flippable sets need an acyclic graph (beta = {b})")
    s = set_size(k)
    order = ordering.order
    return [FlippableSet(tuple(order[i:i + s]), i) for i in range(0, g.n - s + 1, s)]


def flip(g: Digraph, sets, k: int = 3) -> Digraph:
    """Replace the edges inside each chosen set by the directed cycle through it in rank order."""
    if not sets:
        return g
    valid = {fs.vertices for fs in flippable_sets(g, k)}
    remove, add = [], []
    for fs in sets:
        if fs.vertices not in valid:
            raise ValueError(f"{fs} is not a flippable set of this graph")
        vs = fs.vertices
        remove += [(u, v) for u in vs for v in vs if u != v and g.has_edge(u, v)]
        add += [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]
    return g.with_edges(add=add, remove=remove)


# -- enumeration of the switching classes -------------------------------------


def _class_arcs(n: int, k: int, r: int, restricted: int | None = None) -> np.ndarray:
    """Arcs of every C_k-free oriented graph on n vertices with beta = r."""
    if restricted is not None:
        return _select(n, k, r, _sparse_oriented(n, restricted))
    need = 3 ** comb(n, 2)
    if need > budget().switching_space:
        raise BudgetExceeded(f"switching check at n={n} needs switching_space >= {need}; "
                             "use the restricted-edge variant")
    step = min(need, 1 << 18)
    parts = []
    for lo in range(0, need, step):
        codes = np.arange(lo, min(lo + step, need), dtype=np.int64)
        parts.append(_select(n, k, r, batch.arcs_from_digits(n, batch.decode(n, Family.ORIENTED, codes))))
    return np.concatenate(parts, axis=2)


def _select(n: int, k: int, r: int, arcs: np.ndarray) -> np.ndarray:
    arcs = arcs[:, :, ~batch.contains(arcs, Pattern.cycle(k))]
    if r == 0:
        return arcs[:, :, batch.acyclic(n, arcs)]
    return arcs[:, :, batch.beta(n, arcs) == r]


def _sparse_oriented(n: int, max_edges: int) -> np.ndarray:
    """All oriented graphs on n vertices with at most ``max_edges`` edges."""
    P = pairs(n)
    chunks = []
    for e in range(max_edges + 1):
        for chosen in combinations(range(len(P)), e):
            digits = np.zeros((len(P), 2 ** e), dtype=np.int8)
            orient = np.arange(2 ** e)
            for i, p in enumerate(chosen):
                digits[p] = 1 + ((orient >> i) & 1)
            chunks.append(digits)
    return batch.arcs_from_digits(n, np.concatenate(chunks, axis=1))


def _apply_flips(n: int, arcs: np.ndarray, orders: np.ndarray, blocks: tuple[int, ...], s: int) -> np.ndarray:
    out = arcs.copy()
    cols = np.arange(arcs.shape[2])
    for blk in blocks:
        ranks = range(blk * s, blk * s + s)
        for i in ranks:
            for j in ranks:
                if i != j:
                    out[orders[i], orders[j], cols] = (j - blk * s) == (i - blk * s + 1) % s
    return out


def forward_degree_identity_check(n: int, m2: int, k: int = 3, restricted: int | None = None,
                                  largest: bool = False) -> dict:
    """Flip every choice of m2 sets in every acyclic graph and audit the images.

    Each source must have C(floor(n/s), m2) distinct images, each image must be
    C_k-free with beta = m2 and contain exactly m2 induced directed s-cycles,
    and no image may have more than factor^m2 preimages.
    """
    s = set_size(k)
    src = _class_arcs(n, k, 0, restricted)
    B = src.shape[2]
    orders = batch.lex_topological_orders(n, src, largest=largest).astype(np.int64)
    choices = list(combinations(range(n // s), m2))
    expected = comb(n // s, m2)
    images = []
    ok_free = ok_beta = ok_cycles = True
    for blocks in choices:
        img = _apply_flips(n, src, orders, blocks, s)
        ok_free &= not batch.contains(img, Pattern.cycle(k)).any()
        ok_beta &= bool((batch.beta(n, img) == m2).all())
        cyc = batch.induced_cycle4_count(n, img) if s == 4 else _triangle_count(n, img)
        ok_cycles &= bool((cyc == m2).all())
        images.append(batch.codes_from_arcs(n, Family.ORIENTED, img))
    if images:
        per_source = np.stack(images)  # (choices, B)
        distinct = all(len(set(col)) == len(choices) for col in per_source.T.tolist()) if len(choices) > 1 else True
        codes, counts = np.unique(per_source.ravel(), return_counts=True)
        max_pre = int(counts.max()) if counts.size else 0
        image_count = int(codes.size)
    else:
        distinct, max_pre, image_count = True, 0, 0
    bound = preimage_factor(k) ** m2
    edges = B * len(choices)
    return {"n": n, "k": k, "m2": m2, "restricted": restricted, "order_rule": "lex-max" if largest else "lex-min",
            "source_count": B, "images_per_source": len(choices), "expected_per_source": expected,
            "edge_count": edges, "image_count": image_count, "max_preimages": max_pre, "bound": bound,
            "distinct_images": distinct, "images_free": ok_free, "images_beta": ok_beta,
            "images_cycles": ok_cycles,
            "pass": len(choices) == expected and distinct and ok_free and ok_beta and ok_cycles and max_pre <= bound}


def _triangle_count(n: int, arcs: np.ndarray) -> np.ndarray:
    total = np.zeros(arcs.shape[2], dtype=np.int64)
    for a, b, c in combinations(range(n), 3):
        total += (arcs[a, b] & arcs[b, c] & arcs[c, a]) | (arcs[a, c] & arcs[c, b] & arcs[b, a])
    return total


def generalized_binomial(x: Fraction, m: int) -> Fraction:
    out = Fraction(1)
    for i in range(m):
        out = out * (x - i) / (i + 1)
    return out


def backward_bound(n: int, m1: int) -> Fraction:
    """C(n^2/2, m1) 2^m1: ways to re-add m1 edges between non-adjacent pairs."""
    return generalized_binomial(Fraction(n * n, 2), m1) * 2 ** m1


def backward_preimage_bound_check(n: int, m1: int, k: int = 3, restricted: int | None = None) -> dict:
    """Delete the backwards edges (w.r.t. the fixed optimal order) of every graph
    with beta = m1 and bound how many graphs land on each acyclic image."""
    src = _class_arcs(n, k, m1, restricted)
    B = src.shape[2]
    if B:
        _, orders = batch.lex_optimal_orders(n, src)
        rank = np.empty_like(orders, dtype=np.int64)
        cols = np.arange(B)
        for i in range(n):
            rank[orders[i].astype(np.int64), cols] = i
        img = src.copy()
        for u in range(n):
            for v in range(n):
                if u != v:
                    img[u, v] &= rank[u] < rank[v]
        lands = bool(batch.acyclic(n, img).all())
        codes, counts = np.unique(batch.codes_from_arcs(n, Family.ORIENTED, img), return_counts=True)
        max_pre, image_count = int(counts.max()), int(codes.size)
    else:
        lands, max_pre, image_count = True, 0, 0
    bound = backward_bound(n, m1)
    return {"n": n, "k": k, "m1": m1, "restricted": restricted, "source_count": B, "image_count": image_count,
            "max_preimages": max_pre, "bound": str(bound), "images_acyclic": lands,
            "pass": lands and max_pre <= bound}


def class_sizes(n: int, k: int = 3) -> dict[int, int]:
    """|O_{n,k,r}| for every r, from the exhaustive census beta histogram."""
    from .census import exhaustive_census

    rec = exhaustive_census(n, Family.ORIENTED, (Pattern.cycle(k),), ("beta",))
    return {int(key.split("=")[1]): c for key, c in rec.tallies.items() if key.startswith("beta=")}


def ratio_check(n: int, m1: int, m2: int, k: int = 3) -> dict:
    """|O_{n,k,m2}| / |O_{n,k,m1}| against C(floor(n/s), m2) / (C(n^2/2, m1) 2^m1 factor^m2)."""
    sizes = class_sizes(n, k)
    lo, hi = sizes.get(m1, 0), sizes.get(m2, 0)
    bound = Fraction(comb(n // set_size(k), m2)) / (backward_bound(n, m1) * preimage_factor(k) ** m2)
    ratio = Fraction(hi, lo) if lo else None
    return {"n": n, "k": k, "m1": m1, "m2": m2, "O_m1": lo, "O_m2": hi,
            "ratio": None if ratio is None else str(ratio), "bound": str(bound),
            "pass": ratio is not None and ratio >= bound, "sizes": sizes}
