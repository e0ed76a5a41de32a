import pytest
from hypothesis import strategies as st

from rhlmp.constructors import recursive_circulant_g84
from rhlmp.graph import new_graph


@pytest.fixture
def g84():
    return recursive_circulant_g84()


@pytest.fixture
def c3():
    return new_graph(3, [(0, 1), (1, 2), (2, 0)])


@pytest.fixture
def star():
    return new_graph(4, [(0, 1), (0, 2), (0, 3)])


@st.composite
def small_graphs(draw, max_n=10, min_n=0):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return new_graph(n, [p for p, keep in zip(pairs, mask) if keep])
