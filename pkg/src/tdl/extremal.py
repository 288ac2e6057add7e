"""Exact weighted Turán numbers by branch and bound, plus the checks built on them."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterable, Sequence

from .batch import restricted_growth
from .config import budget
from .constructions import balanced_sizes, t_plus, turan_digraph, turan_edge_count
from .constructions import complete_digraph, directed_cycle, transitive_tournament
from .digraph import ABSENT, BACKWARD, DOUBLE, FORWARD, Digraph, Family, bits, pairs, popcount
from .errors import BudgetExceeded
from .order import distance_to_family, pair_edit
from .patterns import Pattern, contains_pattern
from .weights import TWO, Weight, WeightedSize

_GAIN = {DOUBLE: (0, 1), FORWARD: (1, 0), BACKWARD: (1, 0), ABSENT: (0, 0)}


def as_patterns(pattern) -> tuple[Pattern, ...]:
    if isinstance(pattern, Pattern):
        return (pattern,)
    return tuple(pattern)


def _label(patterns: tuple[Pattern, ...]) -> str:
    return "+".join(str(p) for p in patterns)


@dataclass
class ExtremalResult:
    n: int
    patterns: tuple[Pattern, ...]
    family: Family
    weight: Weight
    optimum: WeightedSize
    witnesses: list[Digraph]
    witness_count: int
    node_count: int = 0
    elapsed_ms: float = 0.0
    symmetry: bool = True

    @property
    def value(self):
        return self.optimum.value(self.weight)

    def record(self) -> dict:
        """Deterministic result body; timing and node counts go to the run manifest."""
        return {
            "n": self.n,
            "pattern": _label(self.patterns),
            "family": self.family.value,
            "weight": str(self.weight),
            "optimum_f1": self.optimum.f1,
            "optimum_f2": self.optimum.f2,
            "witness_count": self.witness_count,
            "witnesses_reduced": self.symmetry,
        }


class _Graph:
    """Mutable adjacency used during the search (duck-types Digraph for detection)."""

    __slots__ = ("n", "out", "inn")

    def __init__(self, n: int):
        self.n = n
        self.out = [0] * n
        self.inn = [0] * n

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.out[u] >> v & 1)

    def add(self, u: int, v: int):
        self.out[u] |= 1 << v
        self.inn[v] |= 1 << u

    def remove(self, u: int, v: int):
        self.out[u] &= ~(1 << v)
        self.inn[v] &= ~(1 << u)

    def freeze(self) -> Digraph:
        return Digraph(self.n, tuple(self.out))


def _arcs(state: int, u: int, v: int) -> list[tuple[int, int]]:
    arcs = []
    if state & FORWARD:
        arcs.append((u, v))
    if state & BACKWARD:
        arcs.append((v, u))
    return arcs


class _Search:
    """Depth-first search over pair states in lexicographic pair order.

    At pair (i, j) the undecided pairs are the rest of row i plus every pair
    inside {i+1, ..., n-1}; the latter induce a pattern-free graph, so they
    contribute at most the (already known) optimum on n-i-1 vertices.
    """

    def __init__(self, n, patterns, family, weight, sub_optima, floor, cap, collect_all, symmetry=True):
        self.n = n
        self.patterns = patterns
        self.family = family
        self.weight = weight
        self.pairs = pairs(n)
        self.sub = sub_optima
        self.floor = floor
        self.cap = cap
        self.collect_all = collect_all
        self.states = (DOUBLE, FORWARD, BACKWARD, ABSENT) if family is Family.DIGRAPH else (FORWARD, BACKWARD, ABSENT)
        self.best = None
        self.count = 0
        self.witnesses: list[Digraph] = []
        self.nodes = 0
        self.g = _Graph(n)
        self.symmetry = symmetry
        self.rank = {st: r for r, st in enumerate(self.states)}
        self.chosen = [0] * len(self.pairs)
        # same[j]: j-1 and j agree on every completed row (so they are interchangeable)
        self.same = [False, False] + [True] * (n - 2)
        # best weighted degree each vertex can still reach, as an (f1, f2) pair
        full = (0, n - 1) if family is Family.DIGRAPH else (n - 1, 0)
        self.pot = [list(full) for _ in range(n)]
        top = (0, 1) if family is Family.DIGRAPH else (1, 0)
        self.loss = {s: (g[0] - top[0], g[1] - top[1]) for s, g in _GAIN.items()}

    def _target(self):
        if self.collect_all or self.best is None:
            return self.floor
        if self.floor is None:
            return self.best
        return self.best if self.weight.compare(self.best, self.floor) >= 0 else self.floor

    def _bound(self, p: int, f1: int, f2: int) -> tuple[int, int]:
        i, j = self.pairs[p]
        rest = self.n - 1 - j
        s1, s2 = self.sub[self.n - i - 1]
        if self.family is Family.DIGRAPH:
            return f1 + s1, f2 + rest + s2
        return f1 + rest + s1, f2 + s2

    def _degree_ok(self, state: int, u: int, v: int, target) -> bool:
        """Every vertex of a graph reaching ``target`` has degree >= target - ex(n-1);
        otherwise deleting it would beat the optimum on n-1 vertices."""
        l1, l2 = self.loss[state]
        s1, s2 = self.sub[self.n - 1]
        need = (target[0] - s1, target[1] - s2)
        for w in (u, v):
            p = self.pot[w]
            if self.weight.compare((p[0] + l1, p[1] + l2), need) < 0:
                return False
        return True

    def _charge(self, state: int, u: int, v: int, sign: int):
        l1, l2 = self.loss[state]
        for w in (u, v):
            self.pot[w][0] += sign * l1
            self.pot[w][1] += sign * l2

    def _allowed(self, p: int, state: int) -> bool:
        """Row-wise symmetry breaking: inside a cell of interchangeable
        vertices the states of the current row are non-increasing.  Any
        graph can be relabelled to satisfy this, so every isomorphism class
        keeps at least one representative."""
        if not self.symmetry:
            return True
        u, v = self.pairs[p]
        if v - 1 > u and self.same[v]:
            return self.rank[state] >= self.rank[self.chosen[p - 1]]
        return True

    def _refine(self, p: int):
        """Called when pair p starts a new row; returns the previous cell flags."""
        u, v = self.pairs[p]
        if not self.symmetry or v != u + 1 or u == 0:
            return None
        saved = self.same[:]
        row = u - 1
        first = p - (self.n - u)  # index of pair (row, row+1)
        for j in range(u + 1, self.n):
            if self.same[j]:
                self.same[j] = self.chosen[first + j - row - 1] == self.chosen[first + j - row - 2]
        return saved

    def _leaf(self, f1: int, f2: int):
        val = (f1, f2)
        if self.collect_all:
            self.count += 1
            if len(self.witnesses) < self.cap:
                self.witnesses.append(self.g.freeze())
            return
        c = 1 if self.best is None else self.weight.compare(val, self.best)
        if c > 0:
            self.best, self.count, self.witnesses = val, 0, []
        if c >= 0:
            self.count += 1
            if len(self.witnesses) < self.cap:
                self.witnesses.append(self.g.freeze())

    def _apply(self, state: int, u: int, v: int) -> bool:
        """Add the state's arcs; False (and rolled back) if a pattern appears."""
        arcs = _arcs(state, u, v)
        for a in arcs:
            self.g.add(*a)
        for a in arcs:
            for pat in self.patterns:
                if contains_pattern(self.g, pat, a):
                    for b in arcs:
                        self.g.remove(*b)
                    return False
        return True

    def run(self, p: int = 0, f1: int = 0, f2: int = 0):
        self.nodes += 1
        if p == len(self.pairs):
            self._leaf(f1, f2)
            return
        u, v = self.pairs[p]
        saved = self._refine(p)
        for state in self.states:
            d1, d2 = _GAIN[state]
            target = self._target()
            if target is not None and (self.weight.compare(self._bound(p, f1 + d1, f2 + d2), target) < 0
                                       or not self._degree_ok(state, u, v, target)):
                break  # states are tried in non-increasing gain order
            if not self._allowed(p, state) or not self._apply(state, u, v):
                continue
            self.chosen[p] = state
            self._charge(state, u, v, 1)
            self.run(p + 1, f1 + d1, f2 + d2)
            self._charge(state, u, v, -1)
            for a in _arcs(state, u, v):
                self.g.remove(*a)
        if saved is not None:
            self.same = saved

    def prefixes(self, depth: int):
        """Pattern-free state prefixes of the first ``depth`` pairs, in search order."""
        out = []

        def rec(p, f1, f2, acc):
            if p == depth:
                out.append((tuple(acc), f1, f2))
                return
            u, v = self.pairs[p]
            saved = self._refine(p)
            for state in self.states:
                d1, d2 = _GAIN[state]
                if self.floor is not None and (self.weight.compare(self._bound(p, f1 + d1, f2 + d2), self.floor) < 0
                                               or not self._degree_ok(state, u, v, self.floor)):
                    break
                if not self._allowed(p, state) or not self._apply(state, u, v):
                    continue
                self.chosen[p] = state
                self._charge(state, u, v, 1)
                acc.append(state)
                rec(p + 1, f1 + d1, f2 + d2, acc)
                acc.pop()
                self._charge(state, u, v, -1)
                for a in _arcs(state, u, v):
                    self.g.remove(*a)
            if saved is not None:
                self.same = saved

        rec(0, 0, 0, [])
        return out

    def run_from(self, prefix: Sequence[int], f1: int, f2: int):
        for p, state in enumerate(prefix):
            self._refine(p)
            self.chosen[p] = state
            for a in _arcs(state, *self.pairs[p]):
                self.g.add(*a)
            self._charge(state, *self.pairs[p], 1)
        self.run(len(prefix), f1, f2)


_MEMO: dict = {}


def _full_pairs(m: int, family: Family) -> tuple[int, int]:
    c = comb(m, 2)
    return (0, c) if family is Family.DIGRAPH else (c, 0)


def _seed(n: int, patterns, family: Family, weight: Weight):
    """Best value among named pattern-free constructions: a valid lower bound."""
    cands = [Digraph.empty(n), transitive_tournament(n)]
    for k in range(1, n + 1):
        cands += [turan_digraph(k, n), t_plus(n, k)]
    best = None
    for g in cands:
        if not family.admits(g) or any(contains_pattern(g, p) for p in patterns):
            continue
        ws = g.weighted_size().as_pair()
        if best is None or weight.compare(ws, best) > 0:
            best = ws
    return best


def _sub_optima(n: int, patterns, family: Family, weight: Weight) -> list[tuple[int, int]]:
    return [extremal_number(m, patterns, family, weight, witness_cap=0).optimum.as_pair() if m >= 2 else (0, 0)
            for m in range(n)]


def _run_subtree(args):
    n, patterns, family, weight, sub, floor, cap, symmetry, prefix, f1, f2 = args
    s = _Search(n, patterns, family, weight, sub, floor, cap, False, symmetry)
    s.run_from(prefix, f1, f2)
    return s.best, s.count, s.witnesses, s.nodes


def extremal_number(n: int, pattern, family: Family = Family.DIGRAPH, weight: Weight = TWO,
                    witness_cap: int = 1000, jobs: int = 1, split_depth: int = 3,
                    symmetry: bool = True) -> ExtremalResult:
    """Maximum weighted size over all labelled pattern-free graphs of ``family`` on n vertices.

    Witnesses are the first ``witness_cap`` optimal graphs in search order;
    ``witness_count`` counts all of them.  With ``symmetry`` only
    row-canonical labellings are visited: every isomorphism class of optimal
    graphs is still represented, but labelled copies are not all listed.
    """
    patterns = as_patterns(pattern)
    limit = budget().extremal_digraph_n if family is Family.DIGRAPH else budget().extremal_oriented_n
    if n > limit:
        raise BudgetExceeded(f"exact extremal search for {family.value} limited to n <= {limit}, got n={n}")
    if n < 1:
        raise ValueError("n must be >= 1")
    start = time.perf_counter()
    if n == 1:
        return ExtremalResult(n, patterns, family, weight, WeightedSize(0, 0),
                              [Digraph.empty(1)][:witness_cap], 1, 1, 0.0, symmetry)
    memo_key = (n, patterns, family, weight, symmetry)
    cached = _MEMO.get(memo_key)
    if cached is not None and (cached.witness_count <= len(cached.witnesses) or witness_cap <= len(cached.witnesses)):
        return ExtremalResult(n, patterns, family, weight, cached.optimum, cached.witnesses[:witness_cap],
                              cached.witness_count, cached.node_count, cached.elapsed_ms, symmetry)

    sub = _sub_optima(n, patterns, family, weight)
    floor = _seed(n, patterns, family, weight)
    if jobs <= 1 or len(pairs(n)) <= split_depth:
        s = _Search(n, patterns, family, weight, sub, floor, witness_cap, False, symmetry)
        s.run()
        best, count, wit, nodes = s.best, s.count, s.witnesses, s.nodes
    else:
        root = _Search(n, patterns, family, weight, sub, floor, witness_cap, False, symmetry)
        units = [(n, patterns, family, weight, sub, floor, witness_cap, symmetry, pre, f1, f2)
                 for pre, f1, f2 in root.prefixes(split_depth)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_run_subtree, units))
        best = None
        for b, *_ in parts:
            if b is not None and (best is None or weight.compare(b, best) > 0):
                best = b
        count, wit, nodes = 0, [], root.nodes
        for b, c, w, nd in parts:
            nodes += nd
            if b is not None and weight.compare(b, best) == 0:
                count += c
                wit.extend(w[: witness_cap - len(wit)])
    if best is None:
        raise RuntimeError("search found no graph; the seed bound is inconsistent")
    res = ExtremalResult(n, patterns, family, weight, WeightedSize(*best), wit, count, nodes,
                         (time.perf_counter() - start) * 1000, symmetry)
    if cached is None or len(wit) > len(cached.witnesses):
        _MEMO[memo_key] = res
    return res


def near_extremal_graphs(n: int, pattern, family: Family, weight: Weight, floor, cap: int = 10 ** 6,
                         symmetry: bool = False):
    """All labelled pattern-free graphs whose weighted size is at least ``floor``
    (an (f1, f2) pair, entries may be rational)."""
    patterns = as_patterns(pattern)
    sub = _sub_optima(n, patterns, family, weight)
    s = _Search(n, patterns, family, weight, sub, floor, cap, True, symmetry)
    s.run()
    return s.witnesses, s.count


# -- isomorphism ---------------------------------------------------------------


def _signature(g: Digraph, v: int) -> tuple[int, int, int]:
    return popcount(g.out[v]), popcount(g.inn[v]), popcount(g.out[v] & g.inn[v])


def is_isomorphic(g: Digraph, h: Digraph) -> bool:
    """Permutation search with degree-signature pruning."""
    if g.n != h.n or g.edge_count() != h.edge_count():
        return False
    sg = [_signature(g, v) for v in range(g.n)]
    sh = [_signature(h, v) for v in range(h.n)]
    if sorted(sg) != sorted(sh):
        return False
    order = sorted(range(g.n), key=lambda v: (-popcount(g.und[v]), v))
    phi: dict[int, int] = {}
    used = [False] * h.n

    def rec(i: int) -> bool:
        if i == g.n:
            return True
        x = order[i]
        for y in range(h.n):
            if used[y] or sh[y] != sg[x]:
                continue
            if all(g.has_edge(x, z) == h.has_edge(y, phi[z]) and g.has_edge(z, x) == h.has_edge(phi[z], y)
                   for z in phi):
                phi[x] = y
                used[y] = True
                if rec(i + 1):
                    return True
                del phi[x]
                used[y] = False
        return False

    return rec(0)


def isomorphism_classes(graphs: Iterable[Digraph]) -> list[tuple[Digraph, int]]:
    classes: list[list] = []
    for g in graphs:
        for entry in classes:
            if is_isomorphic(entry[0], g):
                entry[1] += 1
                break
        else:
            classes.append([g, 1])
    return [(g, c) for g, c in classes]


# -- formula checks ------------------------------------------------------------


def cycle_extremal_pair(n: int, k: int) -> tuple[int, int]:
    """(f1, f2) of T^+_{n,k} from the closed formula."""
    q, r = divmod(n, k)
    f2 = q * comb(k, 2) + comb(r, 2)
    return comb(n, 2) - f2, f2


def verify_turan_formula(k_values: Iterable[int], n_values: Iterable[int], weight: Weight = TWO,
                         kinds: Sequence[str] = ("T", "C"), witness_cap: int = 5000, jobs: int = 1) -> dict:
    """Compare exact optima with the closed forms for T_{k+1} and C_{k+1}.

    For T_{k+1} the optimum must be a*t_k(n) (asserted only when 3/2 < a <= 2)
    and every optimal graph isomorphic to DT_k(n); for C_{k+1} the optimum
    must equal the weighted size of T^+_{n,k}.
    """
    rows, bad = [], []
    a = weight
    t_applies = a.is_log3 or a.value > Fraction(3, 2)
    for k in k_values:
        for n in n_values:
            if n < 2:
                continue
            for kind in kinds:
                if kind == "T":
                    pat = Pattern.trans(k + 1)
                    res = extremal_number(n, pat, Family.DIGRAPH, a, witness_cap=witness_cap, jobs=jobs)
                    expected = (0, turan_edge_count(k, n))
                    target = turan_digraph(k, n) if k <= n else complete_digraph(n)
                    row = {"kind": "T", "k": k, "n": n, "pattern": str(pat), "weight": str(a),
                           "optimum": res.optimum.as_pair(), "expected": expected,
                           "witness_count": res.witness_count, "asserted": t_applies}
                    row["value_ok"] = a.compare(res.optimum.as_pair(), expected) == 0
                    complete = res.witness_count == len(res.witnesses)
                    row["witnesses_complete"] = complete
                    classes = isomorphism_classes(res.witnesses)
                    row["iso_classes"] = len(classes)
                    row["unique_ok"] = complete and len(classes) == 1 and is_isomorphic(classes[0][0], target)
                    row["pass"] = (row["value_ok"] and row["unique_ok"]) if t_applies else True
                else:
                    pat = Pattern.cycle(k + 1)
                    res = extremal_number(n, pat, Family.DIGRAPH, a, witness_cap=0, jobs=jobs)
                    expected = cycle_extremal_pair(n, k) if k <= n else _full_pairs(n, Family.DIGRAPH)
                    construction = t_plus(n, k).weighted_size().as_pair() if k <= n else expected
                    row = {"kind": "C", "k": k, "n": n, "pattern": str(pat), "weight": str(a),
                           "optimum": res.optimum.as_pair(), "expected": expected,
                           "witness_count": res.witness_count, "asserted": True}
                    row["value_ok"] = (a.compare(res.optimum.as_pair(), expected) == 0
                                       and a.compare(construction, expected) == 0)
                    row["pass"] = row["value_ok"]
                rows.append(row)
                if not row["pass"]:
                    bad.append(row)
    return {"rows": rows, "counterexamples": bad, "pass": not bad}


def compositions(n: int, k: int, positive: bool = False):
    """All ordered k-tuples of non-negative (or positive) integers summing to n."""
    lo = 1 if positive else 0
    if k == 1:
        if n >= lo:
            yield (n,)
        return
    for first in range(lo, n - lo * (k - 1) + 1):
        for rest in compositions(n - first, k - 1, positive):
            yield (first,) + rest


def multipartite_edges(sizes: Sequence[int]) -> int:
    n = sum(sizes)
    return comb(n, 2) - sum(comb(s, 2) for s in sizes)


def unbalanced_partite_bound_check(k: int, n: int, s) -> bool:
    """e <= t_k(n) - s(s/2 - k) for every complete k-partite graph with a class
    deviating from n/k by at least s (empty classes allowed)."""
    if not (n >= k >= 2):
        raise ValueError("need n >= k >= 2")
    s = Fraction(s)
    if s <= 0:
        raise ValueError("s must be positive")
    t = turan_edge_count(k, n)
    bound = t - s * (s / 2 - k)
    mean = Fraction(n, k)
    for sizes in compositions(n, k):
        if max(abs(x - mean) for x in sizes) >= s:
            if multipartite_edges(sizes) > bound:
                return False
    return True


def unbalanced_partite_sweep(k: int, n: int) -> dict:
    """Check the bound at every deviation value actually attained.

    For a fixed composition the bound, as a function of s on (0, D], is
    weakest at s = D or as s -> 0 (it is concave in s), so checking s = D
    for each composition plus e <= t_k(n) covers every admissible s.
    """
    t = turan_edge_count(k, n)
    mean = Fraction(n, k)
    worst = None
    violations = []
    for sizes in compositions(n, k):
        d = max(abs(x - mean) for x in sizes)
        e = multipartite_edges(sizes)
        if d == 0:
            continue
        slack = t - d * (d / 2 - k) - e
        if e > t or slack < 0:
            violations.append({"sizes": sizes, "e": e, "s": str(d), "slack": str(slack)})
        if worst is None or slack < worst[0]:
            worst = (slack, sizes)
    return {"k": k, "n": n, "pass": not violations, "violations": violations,
            "min_slack": str(worst[0]) if worst else None, "tightest": worst[1] if worst else None}


# -- stability probe -----------------------------------------------------------


def distance_to_turan_digraph(g: Digraph, k: int) -> int:
    """Exact edit distance to the nearest labelled copy of DT_k(n)."""
    n = g.n
    want = sorted(balanced_sizes(n, k))
    states = {pq: g.pair_state(*pq) for pq in pairs(n)}
    best = None
    for assign in restricted_growth(n, k):
        sizes = sorted(assign.count(c) for c in range(k))
        if sizes != want:
            continue
        cost = sum(pair_edit(s, ABSENT if assign[u] == assign[v] else DOUBLE) for (u, v), s in states.items())
        if best is None or cost < best:
            best = cost
    return best


def stability_target(pattern: Pattern, family: Family, weight: Weight) -> str:
    if pattern.kind == "T":
        # an oriented graph is never close to the doubled Turan graph; compare with k-partiteness instead
        return f"turan:{pattern.k - 1}" if family is Family.DIGRAPH else f"kpartite:{pattern.k - 1}"
    if pattern.kind == "C":
        odd_digraph = family is Family.DIGRAPH and not weight.is_log3 and weight.value == 2 and pattern.k % 2 == 1
        return "blowup" if odd_digraph else "transitive"
    raise ValueError("stability probe needs a T or C pattern")


def stability_probe(n: int, pattern: Pattern, family: Family, weight: Weight, deficit) -> dict:
    """Distances from every near-extremal pattern-free graph to the expected structure.

    Nothing is asserted: the lemmas behind this are asymptotic.
    """
    deficit = Fraction(deficit)
    ex = extremal_number(n, pattern, family, weight, witness_cap=0)
    target = stability_target(pattern, family, weight)
    report = {"n": n, "pattern": str(pattern), "family": family.value, "weight": str(weight),
              "deficit": str(deficit), "ex": ex.optimum.as_pair(), "target": target,
              "graphs": 0, "max_distance": None, "histogram": {}}
    if deficit < 0:
        return report
    floor = (ex.optimum.f1 - deficit, ex.optimum.f2)
    graphs, count = near_extremal_graphs(n, pattern, family, weight, floor)
    hist: dict[int, int] = {}
    whole: dict[int, int] = {}
    for g in graphs:
        if target.startswith("turan:"):
            d = distance_to_turan_digraph(g, int(target.split(":")[1]))
        else:
            d = distance_to_family(g, target)
        hist[d] = hist.get(d, 0) + 1
        if target == "transitive":
            # distance to the transitive tournament itself, not just a subgraph of it
            t = distance_to_family(g, "tournament")
            whole[t] = whole.get(t, 0) + 1
    report.update(graphs=count, histogram=dict(sorted(hist.items())),
                  max_distance=max(hist) if hist else None)
    if target == "transitive":
        report["tournament_histogram"] = dict(sorted(whole.items()))
    return report
