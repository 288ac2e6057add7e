import random

import pytest
from hypothesis import strategies as st

from tdl.digraph import Digraph, Family, pairs


@st.composite
def digraphs(draw, min_n=1, max_n=6, family=Family.DIGRAPH):
    n = draw(st.integers(min_n, max_n))
    states = draw(st.lists(st.sampled_from(family.states), min_size=len(pairs(n)), max_size=len(pairs(n))))
    return Digraph.from_pair_states(n, states)


def random_digraph(rng: random.Random, n: int, family=Family.DIGRAPH) -> Digraph:
    return Digraph.from_pair_states(n, [rng.choice(family.states) for _ in pairs(n)])


@pytest.fixture
def rng():
    return random.Random(12345)
