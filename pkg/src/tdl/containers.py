"""The pattern hypergraph D(N, H), its co-degree function, and the bound on it."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, factorial

import mpmath

from .config import budget
from .digraph import Digraph
from .errors import BudgetExceeded
from .patterns import Pattern, labelled_copies

DPS = 40
ASSERT_FROM_N = 8


def _as_digraph(h) -> Digraph:
    return h.to_digraph() if isinstance(h, Pattern) else h


@dataclass(frozen=True)
class PatternHypergraph:
    """r-graph on the ordered pairs of [N]; edges are the copies of H."""

    N: int
    H: Digraph
    edges: tuple[frozenset, ...]

    @property
    def r(self) -> int:
        return self.H.edge_count()

    @property
    def vertex_count(self) -> int:
        return self.N * (self.N - 1)

    def degree_sum(self) -> int:
        return self.r * len(self.edges)


def build_pattern_hypergraph(N: int, H) -> PatternHypergraph:
    H = _as_digraph(H)
    if N < 1:
        raise ValueError("N must be >= 1")
    limit = budget().hypergraph_N
    if N > limit:
        raise BudgetExceeded(f"pattern hypergraph limited to N <= {limit}, got N={N}")
    return PatternHypergraph(N, H, labelled_copies(H, N))


def m_density(H) -> Fraction:
    """max (e(H')-1)/(v(H')-2) over subgraphs H' with at least two edges.

    Isolated vertices only lower the ratio, so H' ranges over edge subsets
    with their endpoints.
    """
    H = _as_digraph(H)
    if not H.is_oriented():
        raise ValueError("m(H) is defined here for oriented graphs only")
    edges = H.edges()
    if len(edges) < 2:
        raise ValueError("m(H) needs e(H) >= 2")
    best = None
    for size in range(2, len(edges) + 1):
        for sub in combinations(edges, size):
            v = len({x for e in sub for x in e})
            val = Fraction(size - 1, v - 2)
            if best is None or val > best:
                best = val
    return best


@dataclass
class CoDegreeProfile:
    N: int
    tau: mpmath.mpf
    d: Fraction
    sums: dict[int, int]  # j -> sum_v d^(j)(v), exact
    delta_j: dict[int, mpmath.mpf]
    delta: mpmath.mpf

    def to_json(self, pattern: str = "") -> dict:
        return {"N": self.N, "pattern": pattern, "tau": mpmath.nstr(self.tau, 20), "d": str(self.d),
                "delta_j": [mpmath.nstr(self.delta_j[j], 20) for j in sorted(self.delta_j)],
                "delta": mpmath.nstr(self.delta, 20)}


def max_codegrees(D: PatternHypergraph, j: int) -> dict:
    """d^(j)(v) for every ground vertex v lying in some edge (others are 0).

    Only j-sets inside an edge have positive degree, so they are counted
    from the edges directly.
    """
    deg: Counter = Counter()
    for e in D.edges:
        for sigma in combinations(sorted(e), j):
            deg[sigma] += 1
    best: dict = {}
    for sigma, c in deg.items():
        for v in sigma:
            if c > best.get(v, 0):
                best[v] = c
    return best


def co_degree(D: PatternHypergraph, tau) -> CoDegreeProfile:
    with mpmath.workdps(DPS):
        tau = mpmath.mpf(tau) if not isinstance(tau, Fraction) else mpmath.mpf(tau.numerator) / tau.denominator
        if tau <= 0:
            raise ValueError("tau must be positive")
        n = D.vertex_count
        r = D.r
        d = Fraction(D.degree_sum(), n)
        sums, dj = {}, {}
        if d == 0:
            return CoDegreeProfile(D.N, tau, d, sums, dj, mpmath.mpf(0))
        nd = D.degree_sum()  # n*d, exact
        total = mpmath.mpf(0)
        for j in range(2, r + 1):
            sums[j] = sum(max_codegrees(D, j).values())
            dj[j] = mpmath.mpf(sums[j]) / (tau ** (j - 1) * nd)
            total += mpmath.mpf(2) ** (-comb(j - 1, 2)) * dj[j]
        delta = mpmath.mpf(2) ** (comb(r, 2) - 1) * total
        return CoDegreeProfile(D.N, tau, d, sums, dj, delta)


def lemma_tau(N: int, H, gamma) -> mpmath.mpf:
    m = m_density(H)
    with mpmath.workdps(DPS):
        g = mpmath.mpf(Fraction(gamma).numerator) / Fraction(gamma).denominator
        return g ** -1 * mpmath.mpf(N) ** (-mpmath.mpf(m.numerator) / m.denominator)


def lemma_bound(H, gamma) -> mpmath.mpf:
    H = _as_digraph(H)
    r = H.edge_count()
    g = Fraction(gamma)
    with mpmath.workdps(DPS):
        return r * mpmath.mpf(2) ** (r * r) * factorial(H.n) ** 2 * (mpmath.mpf(g.numerator) / g.denominator)


def lemma_deltabound_check(H, gamma, N_values) -> dict:
    """delta(D(N,H), gamma^-1 N^(-1/m(H))) against r 2^(r^2) v(H)!^2 gamma.

    The bound is claimed for large N only; it is asserted from N >= 8 and
    reported below that.
    """
    Hd = _as_digraph(H)
    gamma = Fraction(gamma)
    if gamma > 1 or gamma <= 0:
        raise ValueError("gamma must satisfy 0 < gamma <= 1")
    if Hd.edge_count() < 2:
        raise ValueError("pattern needs at least two edges")
    rhs = lemma_bound(Hd, gamma)
    rows = []
    for N in N_values:
        if N < Hd.n:
            continue
        D = build_pattern_hypergraph(N, Hd)
        prof = co_degree(D, lemma_tau(N, Hd, gamma))
        asserted = N >= ASSERT_FROM_N
        ok = bool(prof.delta <= rhs)
        row = prof.to_json(str(H))
        with mpmath.workdps(DPS):
            margin = rhs - prof.delta
        row.update(gamma=str(gamma), bound_rhs=mpmath.nstr(rhs, 20), margin=mpmath.nstr(margin, 20),
                   holds=ok, asserted=asserted)
        rows.append(row)
    return {"pattern": str(H), "gamma": str(gamma), "rows": rows,
            "pass": all(r["holds"] for r in rows if r["asserted"])}
