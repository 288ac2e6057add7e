from fractions import Fraction
from itertools import product
from math import comb, sqrt

import numpy as np
import pytest

from tdl import acceptance
from tdl.census import (count_k_partite, css_check, enumerate_free, exhaustive_census, free_codes,
                        graph_from_code, parse_predicates, sample_census, sandwich_check,
                        subgraph_count_lower_bound)
from tdl.config import Budget, set_budget
from tdl.digraph import Digraph, Family, pairs
from tdl.errors import BudgetExceeded
from tdl.order import beta, optimal_partition
from tdl.patterns import Pattern, contains_any

CASES = [(Family.ORIENTED, (Pattern.trans(3),)), (Family.ORIENTED, (Pattern.cycle(3),)),
         (Family.DIGRAPH, (Pattern.cycle(3), Pattern.cycle(2))), (Family.DIGRAPH, (Pattern.bipartite(1, 2),)),
         (Family.DIGRAPH, (Pattern.trans(4),))]


@pytest.mark.parametrize("family,patterns", CASES, ids=lambda x: str(x))
def test_incremental_matches_vectorised(family, patterns):
    for n in range(1, 5):
        dfs = list(enumerate_free(n, family, patterns))
        assert dfs == sorted(dfs)
        assert dfs == free_codes(n, family, patterns).tolist()


def test_census_against_per_graph_oracle():
    n, family, pats = 4, Family.ORIENTED, (Pattern.trans(3),)
    rec = exhaustive_census(n, family, pats, "k-partite:2,acyclic,beta")
    free = [g for g in (Digraph.from_pair_states(n, s) for s in product(family.states, repeat=comb(n, 2)))
            if not contains_any(g, pats)]
    assert rec.total == len(free)
    assert rec.tallies["k-partite:2"] == sum(optimal_partition(g, 2)[0] == 0 for g in free)
    assert rec.tallies["acyclic"] == sum(beta(g)[0] == 0 for g in free)
    assert sum(v for k, v in rec.tallies.items() if k.startswith("beta=")) == rec.total


def test_pinned_counts():
    assert exhaustive_census(3, Family.ORIENTED, (Pattern.trans(3),), "k-partite:2").tallies["k-partite:2"] == 19
    for n, want in acceptance.T3_FREE_ORIENTED.items():
        assert exhaustive_census(n, Family.ORIENTED, (Pattern.trans(3),)).total == want
    for n, (acyc, total) in acceptance.C3_FREE_ACYCLIC.items():
        rec = exhaustive_census(n, Family.ORIENTED, (Pattern.cycle(3),), "acyclic")
        assert (rec.tallies["acyclic"], rec.total) == (acyc, total)
    assert exhaustive_census(4, Family.ORIENTED).total == 3 ** 6


def test_parallel_census_matches_serial():
    a = exhaustive_census(5, Family.ORIENTED, (Pattern.cycle(3),), "beta,k-partite:3")
    b = exhaustive_census(5, Family.ORIENTED, (Pattern.cycle(3),), "beta,k-partite:3", jobs=2)
    assert a.to_json() == b.to_json()


def brute_k_partite(n, k, family):
    count = 0
    for states in product(family.states, repeat=comb(n, 2)):
        g = Digraph.from_pair_states(n, states)
        if optimal_partition(g, k)[0] == 0:
            count += 1
    return count


@pytest.mark.parametrize("family", list(Family), ids=lambda f: f.value)
def test_k_partite_counts_brute_force(family):
    for n in range(1, 5):
        for k in (1, 2, 3):
            assert count_k_partite(n, k, family) == brute_k_partite(n, k, family)


def test_k_partite_regression():
    for n in range(1, 7):
        assert count_k_partite(n, 2, Family.ORIENTED) == acceptance.K_PARTITE_ORIENTED[n]
        assert count_k_partite(n, 2, Family.DIGRAPH) == acceptance.K_PARTITE_DIGRAPH[n]


def test_sandwich_not_asserted_at_small_n():
    rep = sandwich_check(5, 2)
    assert not rep["asserted"]
    assert set(rep["holds"]) == {"T_lower<=T_middle", "T_middle<T", "T<T_upper", "Tstar_lower<Tstar",
                                 "Tstar<Tstar_upper"}
    assert rep["pass"]


def test_sampling_is_deterministic_and_jobs_independent():
    args = (6, Family.ORIENTED, (Pattern.cycle(3),), "acyclic,beta", 5000, 42)
    a = sample_census(*args)
    assert a.to_json() == sample_census(*args).to_json()
    assert a.to_json() == sample_census(*args, jobs=3).to_json()
    assert a.total == 5000
    assert a.to_json() != sample_census(*args[:-1], 43).to_json()


def test_samples_must_be_positive():
    with pytest.raises(ValueError):
        sample_census(5, Family.ORIENTED, (), (), 0, 1)


def test_sampled_fraction_within_three_sigma():
    exact = exhaustive_census(4, Family.ORIENTED, (Pattern.cycle(3),), "acyclic")
    p = float(exact.fraction("acyclic"))
    m = 20000
    est = sample_census(4, Family.ORIENTED, (Pattern.cycle(3),), "acyclic", m, 9)
    assert abs(float(est.fraction("acyclic")) - p) <= 3 * sqrt(p * (1 - p) / m)


@pytest.mark.parametrize("n", [5, 6])
def test_sampled_rates_cross_check(n):
    exact = exhaustive_census(n, Family.ORIENTED, (Pattern.cycle(3),), "acyclic")
    est = sample_census(n, Family.ORIENTED, (Pattern.cycle(3),), "acyclic", 20000, n)
    accept = exact.total / exact.space
    assert abs(est.total / est.space - accept) <= 4 * sqrt(accept * (1 - accept) / est.space)


def test_low_acceptance_is_refused():
    # forbidding a single edge accepts only the empty graph, with probability 3^-36
    edge = Pattern.parse("X:2;0->1")
    with pytest.raises(BudgetExceeded):
        sample_census(9, Family.ORIENTED, (edge,), (), 10, 0)


def test_budget_refusal():
    with pytest.raises(BudgetExceeded):
        exhaustive_census(30, Family.DIGRAPH, (Pattern.cycle(3),))
    set_budget(Budget(census_space=100))
    try:
        with pytest.raises(BudgetExceeded):
            exhaustive_census(4, Family.ORIENTED)
    finally:
        set_budget(None)


def test_parse_predicates():
    assert parse_predicates("k-partite:2, acyclic") == ("k-partite:2", "acyclic")
    for bad in ("k-partite", "cube", "acyclic:3"):
        with pytest.raises(ValueError):
            parse_predicates(bad)


def test_graph_from_code_round_trip():
    codes = free_codes(4, Family.DIGRAPH, (Pattern.cycle(3),))[:50]
    for c in codes.tolist():
        g = graph_from_code(4, Family.DIGRAPH, c)
        digits = [int(x) for x in g.pair_states()]
        assert sum(d * 4 ** (len(digits) - 1 - i) for i, d in enumerate(digits)) == c


def test_css_small():
    rep = css_check(4)
    assert rep["pass"] and rep["violations"] == 0
    assert Fraction(rep["max_ratio"]) <= Fraction(1, 2)


def test_subgraph_count_lower_bound():
    for p in (Pattern.trans(3), Pattern.cycle(3)):
        assert subgraph_count_lower_bound(4, p)["pass"]


def test_max_weighted_from_profile():
    rec = exhaustive_census(4, Family.DIGRAPH, (Pattern.trans(3),))
    from tdl.weights import TWO
    assert rec.max_weighted(TWO) == (0, 4)
