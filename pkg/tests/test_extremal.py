import random
from fractions import Fraction

import pytest

from tdl.census import exhaustive_census
from tdl.config import Budget, set_budget
from tdl.constructions import t_plus, turan_digraph
from tdl.digraph import Digraph, Family
from tdl.errors import BudgetExceeded
from tdl.extremal import (compositions, cycle_extremal_pair, distance_to_turan_digraph, extremal_number,
                          is_isomorphic, isomorphism_classes, multipartite_edges, near_extremal_graphs,
                          stability_probe, unbalanced_partite_bound_check, unbalanced_partite_sweep,
                          verify_turan_formula)
from tdl.patterns import Pattern, contains_any
from tdl.weights import LOG3, TWO, Weight

from conftest import random_digraph


def test_examples():
    assert extremal_number(5, Pattern.cycle(3), Family.DIGRAPH, TWO).value == 12
    assert extremal_number(4, Pattern.trans(3), Family.DIGRAPH, TWO).optimum.as_pair() == (0, 4)
    assert extremal_number(1, Pattern.cycle(3)).optimum.as_pair() == (0, 0)


@pytest.mark.parametrize("family", list(Family), ids=lambda f: f.value)
@pytest.mark.parametrize("pattern", ["T:3", "C:3", "C:4", "DK:1,2"])
def test_matches_census_oracle(family, pattern):
    p = Pattern.parse(pattern)
    for n in range(2, 6 if family is Family.ORIENTED else 5):
        rec = exhaustive_census(n, family, (p,))
        for a in (TWO, Weight.rational(3, 2), LOG3, Weight.rational(1)):
            got = extremal_number(n, p, family, a, witness_cap=0).optimum.as_pair()
            assert a.compare(got, rec.max_weighted(a)) == 0, (n, str(a))


def test_multiple_patterns():
    pats = (Pattern.trans(3), Pattern.cycle(3))
    for n in range(2, 6):
        rec = exhaustive_census(n, Family.DIGRAPH, pats)
        assert extremal_number(n, pats, Family.DIGRAPH).optimum.as_pair() == rec.max_weighted(TWO)


@pytest.mark.parametrize("n", [4, 5, 6])
def test_symmetry_breaking_keeps_every_class(n):
    full = extremal_number(n, Pattern.trans(3), Family.DIGRAPH, TWO, witness_cap=10 ** 5, symmetry=False)
    reduced = extremal_number(n, Pattern.trans(3), Family.DIGRAPH, TWO, witness_cap=10 ** 5)
    assert full.optimum == reduced.optimum
    assert reduced.witness_count <= full.witness_count
    assert len(isomorphism_classes(full.witnesses)) == len(isomorphism_classes(reduced.witnesses)) == 1


def test_witnesses_are_valid():
    p = Pattern.cycle(4)
    res = extremal_number(6, p, Family.DIGRAPH, Weight.rational(5, 3), witness_cap=50)
    for g in res.witnesses:
        assert not contains_any(g, [p])
        assert g.weighted_size() == res.optimum


def test_monotone_in_n_and_weight():
    p = Pattern.trans(4)
    for a in (Weight.rational(1), Weight.rational(3, 2), LOG3, TWO):
        vals = [extremal_number(n, p, Family.DIGRAPH, a, witness_cap=0).value for n in range(2, 7)]
        assert vals == sorted(vals)
    by_weight = [extremal_number(6, p, Family.DIGRAPH, a, witness_cap=0).value
                 for a in (Weight.rational(1), Weight.rational(3, 2), LOG3, TWO)]
    assert by_weight == sorted(by_weight)


def test_parallel_matches_serial():
    a = extremal_number(6, Pattern.cycle(3), Family.DIGRAPH, TWO, witness_cap=20, jobs=1)
    from tdl import extremal
    extremal._MEMO.clear()
    b = extremal_number(6, Pattern.cycle(3), Family.DIGRAPH, TWO, witness_cap=20, jobs=2)
    assert a.record() == b.record()
    assert [g.to_text() for g in a.witnesses] == [g.to_text() for g in b.witnesses]


def test_budget_refusal():
    set_budget(Budget(extremal_digraph_n=5))
    try:
        with pytest.raises(BudgetExceeded):
            extremal_number(6, Pattern.cycle(3))
    finally:
        set_budget(None)


def test_turan_formula_small():
    rep = verify_turan_formula(range(2, 4), range(3, 7), TWO)
    assert rep["pass"], rep["counterexamples"]


def test_cycle_pair_matches_construction():
    for k in range(2, 6):
        for n in range(k, 12):
            assert t_plus(n, k).weighted_size().as_pair() == cycle_extremal_pair(n, k)


def test_isomorphism():
    rng = random.Random(11)
    for _ in range(50):
        g = random_digraph(rng, 5)
        perm = list(range(5))
        rng.shuffle(perm)
        assert is_isomorphic(g, g.relabel(perm))
    assert not is_isomorphic(Digraph.from_text("3;0->1,1->2"), Digraph.from_text("3;0->1,0->2"))


def test_compositions_and_edges():
    assert len(list(compositions(5, 3))) == 21
    assert len(list(compositions(5, 3, positive=True))) == 6
    assert multipartite_edges([2, 2, 1]) == 8


def test_unbalanced_partite_bound():
    for k in (2, 3):
        for n in range(k, 16):
            assert unbalanced_partite_sweep(k, n)["pass"]
    assert unbalanced_partite_bound_check(2, 6, 1)


def test_distance_to_turan_digraph():
    assert distance_to_turan_digraph(turan_digraph(3, 6), 3) == 0
    g = turan_digraph(2, 4).with_edges(remove=[(0, 2)])
    assert distance_to_turan_digraph(g, 2) == 1


def test_near_extremal_includes_optimum():
    ex = extremal_number(4, Pattern.cycle(3), Family.DIGRAPH, TWO, witness_cap=10 ** 4, symmetry=False)
    graphs, count = near_extremal_graphs(4, Pattern.cycle(3), Family.DIGRAPH, TWO, ex.optimum.as_pair())
    assert count == ex.witness_count


def test_stability_examples():
    rep = stability_probe(5, Pattern.trans(3), Family.DIGRAPH, TWO, 1)
    assert rep["graphs"] == 130 and rep["max_distance"] == 1
    rep = stability_probe(5, Pattern.cycle(3), Family.ORIENTED, LOG3, 0)
    assert rep["histogram"] == {0: 120}
    rep = stability_probe(5, Pattern.cycle(3), Family.DIGRAPH, TWO, 1)
    assert rep["target"] == "blowup" and rep["graphs"] == 2290 and rep["max_distance"] == 2
    assert stability_probe(4, Pattern.cycle(3), Family.DIGRAPH, TWO, Fraction(-1))["graphs"] == 0
