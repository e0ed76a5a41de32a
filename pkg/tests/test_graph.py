import random

import pytest
from hypothesis import given, settings, strategies as st

from rhlmp.graph import (DuplicateEdgeError, FaultError, FaultSet, SelfLoopError,
                         VertexRangeError, components, delete_faults, is_bipartite,
                         isolated_count, isolated_vertices, min_degree, new_graph)

from conftest import small_graphs


def test_triangle(c3):
    assert c3.order == 3 and c3.size == 3
    assert c3.neighbors(0) == [1, 2]


def test_single_vertex():
    g = new_graph(1, [])
    assert g.vertices() == [0] and g.size == 0


@pytest.mark.parametrize("n, edges, err", [
    (2, [(0, 0)], SelfLoopError),
    (2, [(0, 2)], VertexRangeError),
    (3, [(0, 1), (1, 0)], DuplicateEdgeError),
])
def test_bad_input(n, edges, err):
    with pytest.raises(err):
        new_graph(n, edges)


def test_edge_index_is_lexicographic():
    g = new_graph(4, [(2, 3), (0, 2), (1, 0)])
    assert g.edges == ((0, 1), (0, 2), (2, 3))
    assert g.edge_id(3, 2) == 2


def test_delete_vertex_from_triangle(c3):
    h = delete_faults(c3, FaultSet.of([0]))
    assert h.vertices() == [1, 2] and h.live_edges() == [(1, 2)]
    assert h.neighbors(1) == [2]
    # ids survive deletion
    assert h.n == 3 and not h.is_alive(0)


def test_delete_edge_from_triangle(c3):
    h = delete_faults(c3, FaultSet.of(edges=[(1, 0)]))
    assert h.live_edges() == [(0, 2), (1, 2)]
    assert h.degree(0) == 1


def test_g84_vertex_and_edge(g84):
    h = delete_faults(g84, FaultSet.of([2], [(0, 1)]))
    assert h.order == 7 and h.size == 8


def test_faults_must_be_live(c3):
    h = delete_faults(c3, FaultSet.of([0]))
    with pytest.raises(FaultError):
        delete_faults(h, FaultSet.of([0]))
    with pytest.raises(FaultError):
        delete_faults(h, FaultSet.of(edges=[(0, 1)]))


def test_isolated_counts(g84):
    assert isolated_count(g84) == 0
    assert isolated_vertices(g84, {1, 7, 4}) == [0]
    h = delete_faults(g84, FaultSet.of([2], [(0, 1)]))
    assert isolated_vertices(h, {4, 5, 7}) == [0, 1, 3, 6]


def test_min_degree(g84):
    assert min_degree(g84) == 3
    assert min_degree(delete_faults(g84, FaultSet.of([0]))) == 2
    with pytest.raises(ValueError):
        min_degree(new_graph(0, []))


def test_components(c3, g84):
    assert components(c3) == [{0, 1, 2}]
    assert components(delete_faults(c3, FaultSet.of([0]))) == [{1, 2}]
    h = delete_faults(g84, FaultSet.of([2, 4, 5, 7], [(0, 1)]))
    assert components(h) == [{0}, {1}, {3}, {6}]


def test_bipartite(c3):
    assert not is_bipartite(c3)
    assert is_bipartite(new_graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)]))


def test_faultset_normalizes():
    f = FaultSet.of([3, 1], [(2, 0)])
    assert f.sorted_edges() == [(0, 2)] and f.size == 3
    assert FaultSet.from_dict(f.to_dict()) == f


@settings(max_examples=80, deadline=None)
@given(small_graphs(max_n=9, min_n=1), st.randoms(use_true_random=False))
def test_deletion_order_is_irrelevant(g, rnd):
    verts = g.vertices()
    vs = rnd.sample(verts, rnd.randint(0, len(verts)))
    es = [e for e in g.live_edges() if rnd.random() < 0.3]
    f = FaultSet.of(vs, es)
    at_once = delete_faults(g, f)
    items = [("v", v) for v in vs] + [("e", e) for e in es]
    rnd.shuffle(items)
    h = g
    for tag, x in items:
        if tag == "v":
            h = delete_faults(h, FaultSet.of([x]))
        elif h.is_alive(x[0]) and h.is_alive(x[1]):
            h = delete_faults(h, FaultSet.of(edges=[x]))
    assert h == at_once


@settings(max_examples=80, deadline=None)
@given(small_graphs(max_n=9), st.randoms(use_true_random=False))
def test_isolated_count_laws(g, rnd):
    s = rnd.sample(g.vertices(), rnd.randint(0, g.order))
    rest = delete_faults(g, FaultSet.of(s))
    assert isolated_count(g, s) <= g.order - len(s)
    singles = sum(1 for c in components(rest) if len(c) == 1)
    assert isolated_count(g, s) == singles


@settings(max_examples=60, deadline=None)
@given(small_graphs(max_n=8))
def test_neighbors_are_live(g):
    rnd = random.Random(g.size)
    f = FaultSet.of(rnd.sample(g.vertices(), g.order // 3),
                    [e for e in g.live_edges() if rnd.random() < 0.2])
    h = delete_faults(g, f)
    live = set(h.live_edges())
    for v in h.vertices():
        for w in h.neighbors(v):
            assert h.is_alive(w) and (min(v, w), max(v, w)) in live
        assert h.degree(v) == len(h.neighbors(v))
    adj = h.live_adjacency()
    for v, ws in adj.items():
        assert all(v in adj[w] for w in ws)
