import random

import pytest
from hypothesis import strategies as st

from sepgraph.generators import random_separated_graph
from sepgraph.samples import sample


@pytest.fixture(scope="session")
def e23():
    return sample("e23")


@pytest.fixture(scope="session")
def e22():
    return sample("e22")


@pytest.fixture(scope="session")
def e12():
    return sample("e12")


@st.composite
def graphs(draw, max_edges=6, trivial=False):
    seed = draw(st.integers(min_value=0, max_value=2**32 - 1))
    return random_separated_graph(random.Random(seed), max_edges=max_edges, trivial=trivial)
