import random
from fractions import Fraction

import pytest

from tdl.constructions import transitive_tournament
from tdl.digraph import Digraph
from tdl.order import beta
from tdl.patterns import Pattern, contains_pattern
from tdl.switching import (backward_bound, backward_preimage_bound_check, flip, flippable_sets,
                           forward_degree_identity_check, generalized_binomial, ratio_check)


def test_flippable_set_counts():
    assert len(flippable_sets(transitive_tournament(9))) == 2
    assert len(flippable_sets(transitive_tournament(9), k=4)) == 3
    with pytest.raises(ValueError):
        flippable_sets(Digraph.from_text("3;0->1,1->2,2->0"))


def test_flip_makes_a_four_cycle():
    g = Digraph.from_text("5;0->1,0->2,1->3,2->3,3->4")
    sets = flippable_sets(g)
    h = flip(g, sets[:1])
    assert beta(h)[0] == 1
    assert contains_pattern(h, Pattern.cycle(4))
    assert not contains_pattern(h, Pattern.cycle(3))


def test_flip_rejects_foreign_sets():
    from tdl.switching import FlippableSet
    g = transitive_tournament(5)
    with pytest.raises(ValueError):
        flip(g, [FlippableSet((1, 2, 3, 4), 1)])


@pytest.mark.parametrize("n", [4, 5])
def test_forward_identity(n):
    rep = forward_degree_identity_check(n, 1)
    assert rep["pass"]
    assert rep["images_per_source"] == rep["expected_per_source"] == 1


def test_tie_break_does_not_matter():
    a = forward_degree_identity_check(5, 1)
    b = forward_degree_identity_check(5, 1, largest=True)
    assert a["pass"] and b["pass"]
    assert a["max_preimages"] <= 256 and b["max_preimages"] <= 256


def test_k4_variant():
    rep = forward_degree_identity_check(5, 1, k=4)
    assert rep["pass"] and rep["bound"] == 32


def test_restricted_variant():
    rep = forward_degree_identity_check(8, 2, restricted=3)
    assert rep["pass"]


def test_backward_bound():
    assert generalized_binomial(Fraction(25, 2), 1) == Fraction(25, 2)
    assert backward_bound(5, 1) == 25
    rep = backward_preimage_bound_check(5, 1)
    assert rep["pass"] and rep["images_acyclic"]


def test_ratio_direction():
    rep = ratio_check(5, 0, 1)
    assert rep["pass"]
    assert Fraction(rep["ratio"]) >= Fraction(rep["bound"])
