import itertools

import pytest
from hypothesis import given

from tdl.constructions import (balanced_sizes, complete_digraph, directed_cycle, t_plus, transitive_tournament,
                               turan_digraph, turan_edge_count)
from tdl.digraph import Digraph, Family
from tdl.patterns import Pattern, contains_pattern

from conftest import digraphs


@given(digraphs(max_n=9))
def test_text_round_trip(g):
    assert Digraph.from_text(g.to_text()) == g


@given(digraphs(max_n=9))
def test_hex_round_trip(g):
    assert Digraph.from_hex(g.to_hex()) == g


@given(digraphs(max_n=7))
def test_pair_states_round_trip(g):
    assert Digraph.from_pair_states(g.n, g.pair_states()) == g


@given(digraphs(max_n=7))
def test_weighted_size_counts_edges(g):
    s = g.weighted_size()
    assert s.f1 + 2 * s.f2 == g.edge_count()
    assert s.f2 == g.double_pairs()


def test_rejects_loops_and_bad_literals():
    with pytest.raises(ValueError):
        Digraph.from_edges(2, [(0, 0)])
    with pytest.raises(ValueError):
        Digraph.from_text("3;0->5")
    with pytest.raises(ValueError):
        Digraph.from_text("3;0->1,0->1")
    with pytest.raises(ValueError):
        Digraph.from_hex("3:123")


def test_family_admits():
    g = Digraph.from_edges(2, [(0, 1), (1, 0)])
    assert Family.DIGRAPH.admits(g)
    assert not Family.ORIENTED.admits(g)
    assert Family.parse("Oriented") is Family.ORIENTED


@pytest.mark.parametrize("k,n", [(k, n) for n in range(2, 11) for k in range(2, n + 1)])
def test_constructions_avoid_their_pattern(k, n):
    dt = turan_digraph(k, n)
    assert dt.edge_count() == 2 * turan_edge_count(k, n)
    assert not contains_pattern(dt, Pattern.trans(k + 1))
    tp = t_plus(n, k)
    assert not contains_pattern(tp, Pattern.cycle(k + 1))
    assert tp.weighted_size().as_pair()[0] + tp.weighted_size().as_pair()[1] == n * (n - 1) // 2


def test_turan_edge_count_matches_sizes():
    for k in range(1, 6):
        for n in range(0, 15):
            sizes = balanced_sizes(n, k)
            want = sum(a * b for a, b in itertools.combinations(sizes, 2))
            assert turan_edge_count(k, n) == want


def test_small_constructions():
    assert transitive_tournament(4).edge_count() == 6
    assert contains_pattern(directed_cycle(5), Pattern.cycle(5))
    assert complete_digraph(3).edge_count() == 6
