import random
from itertools import permutations, product

import pytest
from hypothesis import given, settings

from tdl.config import Budget, set_budget
from tdl.constructions import blow_up, transitive_tournament
from tdl.digraph import Digraph
from tdl.errors import BudgetExceeded
from tdl.order import (_cost_to_go_numpy, _cost_to_go_small, backwards_count, beta, blowup_distance,
                       distance_to_family, gamma, optimal_partition, optimality_local_check)

from conftest import digraphs, random_digraph


def brute_beta(g):
    return min(backwards_count(g, p) for p in permutations(range(g.n)))


def has_cycle(g):
    state = [0] * g.n

    def dfs(u):
        state[u] = 1
        for v in range(g.n):
            if g.has_edge(u, v) and (state[v] == 1 or (state[v] == 0 and dfs(v))):
                return True
        state[u] = 2
        return False

    return any(state[v] == 0 and dfs(v) for v in range(g.n))


@given(digraphs(max_n=6))
def test_beta_matches_permutations(g):
    b, ordering = beta(g)
    assert b == brute_beta(g)
    assert backwards_count(g, ordering.order) == b
    assert sorted(ordering.order) == list(range(g.n))


@given(digraphs(max_n=6))
def test_beta_witness_is_lex_least(g):
    b, ordering = beta(g)
    first = next(p for p in permutations(range(g.n)) if backwards_count(g, p) == b)
    assert ordering.order == first


@given(digraphs(max_n=7))
def test_acyclic_iff_beta_zero(g):
    assert (beta(g)[0] == 0) == (not has_cycle(g))


def test_numpy_cost_matches_python(rng):
    for n in (5, 9, 12):
        g = random_digraph(rng, n)
        assert list(_cost_to_go_numpy(g)) == _cost_to_go_small(g)


def test_examples():
    assert beta(Digraph.from_text("3;0->1,1->2,2->0"))[0] == 1
    assert beta(transitive_tournament(6))[0] == 0
    assert gamma(Digraph.empty(4)) == 6


def test_budget_refusal():
    set_budget(Budget(fas_n=5))
    try:
        with pytest.raises(BudgetExceeded):
            beta(Digraph.empty(6))
    finally:
        set_budget(None)


def brute_partition(g, k):
    return min(sum(1 for u, v in g.edges() if c[u] == c[v]) for c in product(range(k), repeat=g.n))


@given(digraphs(max_n=6))
def test_partition_matches_brute_force(g):
    for k in (1, 2, 3):
        value, part = optimal_partition(g, k)
        assert value == brute_partition(g, k)
        assert optimality_local_check(g, part)


@given(digraphs(max_n=7))
def test_partition_monotone_in_k(g):
    values = [optimal_partition(g, k)[0] for k in range(1, 5)]
    assert values == sorted(values, reverse=True)


def brute_blowup(g):
    """Place each vertex in a part (with a side); parts are size 1 or two equal halves."""
    n, best = g.n, None
    for place in product(range(n), repeat=n):
        parts = {}
        for v, p in enumerate(place):
            parts.setdefault(p, []).append(v)
        sizes = [len(m) for m in parts.values()]
        if any(s > 1 and s % 2 for s in sizes):
            continue
        big = [m for m in parts.values() if len(m) > 1]
        for sides in product(*[[h for h in _halves(m)] for m in big]):
            side = {}
            for half in sides:
                for v in half:
                    side[v] = 1
            cost = 0
            for u, v in g.edges():
                if place[u] > place[v] or (place[u] == place[v] and side.get(u, 0) == side.get(v, 0)):
                    cost += 1
            best = cost if best is None else min(best, cost)
    return best


def _halves(members):
    from itertools import combinations
    first = members[0]
    for rest in combinations(members[1:], len(members) // 2 - 1):
        yield (first,) + rest


def test_blowup_distance_matches_placements():
    rng = random.Random(3)
    for _ in range(25):
        g = random_digraph(rng, rng.randint(1, 5))
        assert blowup_distance(g) == brute_blowup(g)


def test_blowup_of_itself_is_zero():
    assert blowup_distance(blow_up([2, 1, 4])) == 0


@settings(max_examples=50)
@given(digraphs(max_n=5))
def test_distance_families(g):
    b = beta(g)[0]
    assert distance_to_family(g, "transitive") == b
    assert distance_to_family(g, "tournament") == b + gamma(g)
    assert distance_to_family(g, "kpartite:2") == brute_partition(g, 2)
    assert distance_to_family(g, "blowup") <= b


def test_bad_family_spec():
    with pytest.raises(ValueError):
        distance_to_family(Digraph.empty(2), "kpartite")
    with pytest.raises(ValueError):
        distance_to_family(Digraph.empty(2), "cube")
