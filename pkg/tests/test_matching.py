from fractions import Fraction

import pytest
from hypothesis import given, settings

from rhlmp.constructors import Bijection, compose, recursive_circulant_g84
from rhlmp.graph import FaultSet, delete_faults, is_bipartite, new_graph
from rhlmp.hamiltonian import hamiltonian_cycle
from rhlmp.matching import (CertificateError, DeficiencyWitness, FractionalMatching,
                            bipartite_double_cover, fpm_from_hamiltonian_cycle,
                            has_almost_perfect_matching, has_fractional_perfect_matching,
                            has_perfect_matching, max_matching, odd_components_witness,
                            patch_cross_edge, scheinerman_oracle)
from rhlmp.oracles import brute_force_matching_number, random_graph
from rhlmp.preclusion import iter_fault_sets

from conftest import small_graphs

HALF = Fraction(1, 2)


def cycle(n):
    return new_graph(n, [(i, (i + 1) % n) for i in range(n)])


# -- integral matchings -------------------------------------------------------


def test_triangle_matching(c3):
    m = max_matching(c3)
    m.check(c3)
    assert m.size == 1 and len(m.exposed) == 1


def test_g84_perfect(g84):
    m = max_matching(g84)
    m.check(g84)
    assert m.size == 4 and not m.exposed
    assert has_perfect_matching(g84)


@pytest.mark.parametrize("k", [1, 2, 3, 5, 7])
def test_odd_cycles(k):
    g = cycle(2 * k + 1)
    assert max_matching(g).size == k
    assert has_almost_perfect_matching(g) and not has_perfect_matching(g)


def test_apm_after_vertex_deletion(g84):
    assert has_almost_perfect_matching(delete_faults(g84, FaultSet.of([0])))


def test_triangle_plus_isolated():
    g = new_graph(4, [(0, 1), (1, 2), (2, 0)])
    assert not has_perfect_matching(g)
    w = odd_components_witness(g)
    w.check(g)


def test_petersen_and_blossom_chain():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    pet = new_graph(10, outer + inner + spokes)
    assert max_matching(pet).size == 5
    # two pentagons joined by a path: augmenting path must pass through blossoms
    g = new_graph(12, [(i, (i + 1) % 5) for i in range(5)]
                  + [(5 + i, 5 + (i + 1) % 5) for i in range(5)] + [(0, 10), (10, 11), (11, 5)])
    assert max_matching(g).size == brute_force_matching_number(g) == 6


def test_matching_vs_brute_force_seeded():
    for i in range(120):
        g = random_graph(7000 + i, 14)
        m = max_matching(g)
        m.check(g)
        assert m.size == brute_force_matching_number(g), i


@settings(max_examples=150, deadline=None)
@given(small_graphs(max_n=11))
def test_matching_property(g):
    m = max_matching(g)
    m.check(g)
    assert m.size == brute_force_matching_number(g)
    if g.order % 2 == 0:
        assert has_perfect_matching(g) == (2 * m.size == g.order)
    else:
        assert has_almost_perfect_matching(g) == (2 * m.size == g.order - 1)


@settings(max_examples=80, deadline=None)
@given(small_graphs(max_n=10, min_n=1))
def test_tutte_berge_witness(g):
    m = max_matching(g)
    if 2 * m.size >= g.order - 1:
        with pytest.raises(CertificateError):
            odd_components_witness(g)
    else:
        odd_components_witness(g).check(g)


# -- double cover and fractional matchings -------------------------------------


def test_double_cover_examples(c3, g84):
    c6 = bipartite_double_cover(c3)
    assert c6.size == 6 and is_bipartite(c6)
    assert all(c6.degree(v) == 2 for v in c6.vertices())
    one = bipartite_double_cover(new_graph(2, [(0, 1)]))
    assert one.live_edges() == [(0, 3), (1, 2)]
    d = bipartite_double_cover(g84)
    assert (d.order, d.size) == (16, 24) and is_bipartite(d)


def test_fpm_triangle(c3):
    ok, fm = has_fractional_perfect_matching(c3)
    assert ok and all(fm.weight(*e) == HALF for e in c3.live_edges())
    fm.check(c3)


def test_fpm_star(star):
    ok, w = has_fractional_perfect_matching(star)
    assert not ok
    assert w == DeficiencyWitness(frozenset({0}), frozenset({1, 2, 3}))
    w.check(star)


def test_fpm_g84_vertex_edge(g84):
    h = delete_faults(g84, FaultSet.of([2], [(0, 1)]))
    ok, w = has_fractional_perfect_matching(h)
    assert not ok
    assert sorted(w.s) == [4, 5, 7] and sorted(w.isolated) == [0, 1, 3, 6]


def test_half_integral_normal_form():
    # two disjoint triangles plus a 4-cycle
    g = new_graph(10, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3),
                       (6, 7), (7, 8), (8, 9), (9, 6)])
    ok, fm = has_fractional_perfect_matching(g)
    assert ok
    fm.check(g)
    cycles = fm.half_cycles()
    assert all(len(c) % 2 == 1 for c in cycles)
    assert sorted(map(tuple, cycles)) == [(0, 1, 2), (3, 4, 5)]


def test_json_uses_exact_strings(c3):
    _, fm = has_fractional_perfect_matching(c3)
    data = fm.to_json(c3)
    assert set(data.values()) == {"1/2"}
    back = FractionalMatching.from_json(data)
    back.check(c3)


def test_scheinerman_examples(c3, star):
    assert scheinerman_oracle(c3)
    assert not scheinerman_oracle(star)


def test_oracle_agreement_seeded():
    for i in range(200):
        g = random_graph(5000 + i, 12)
        ok, cert = has_fractional_perfect_matching(g)
        cert.check(g)
        assert ok == scheinerman_oracle(g), i


def test_oracle_agreement_g3_faults(g84):
    for k in (1, 2):
        for f in iter_fault_sets(g84, "fsmp", k):
            h = delete_faults(g84, f)
            assert has_fractional_perfect_matching(h)[0] == scheinerman_oracle(h)


@settings(max_examples=200, deadline=None)
@given(small_graphs(max_n=10))
def test_fpm_property(g):
    ok, cert = has_fractional_perfect_matching(g)
    cert.check(g)
    assert ok == scheinerman_oracle(g)
    if has_perfect_matching(g):
        assert ok


@settings(max_examples=80, deadline=None)
@given(small_graphs(max_n=10, min_n=2))
def test_hint_repair_agrees(g):
    ok, fm = has_fractional_perfect_matching(g)
    edges = g.live_edges()
    if not ok or not edges:
        return
    h = delete_faults(g, FaultSet.of([g.vertices()[0]], [edges[-1]]))
    fresh = has_fractional_perfect_matching(h)[0]
    repaired, cert = has_fractional_perfect_matching(h, hint=fm)
    cert.check(h)
    assert repaired == fresh


def test_fpm_from_cycle(c3, g84):
    fm = fpm_from_hamiltonian_cycle(c3, [0, 1, 2])
    assert fm.support() == c3.live_edges()
    fm = fpm_from_hamiltonian_cycle(g84, list(range(8)))
    assert fm.support() == sorted((i, (i + 1) % 8) if i < 7 else (0, 7) for i in range(8))
    assert all(fm.vertex_sum(v) == 1 for v in range(8))
    with pytest.raises(ValueError):
        fpm_from_hamiltonian_cycle(g84, list(range(7)))


def test_patch_two_triangles():
    g = new_graph(8, [(0, 1), (1, 2), (2, 0), (0, 3), (4, 5), (5, 6), (6, 4), (4, 7), (3, 7)])
    tri0 = {(0, 1): HALF, (1, 2): HALF, (0, 2): HALF}
    tri1 = {(4, 5): HALF, (5, 6): HALF, (4, 6): HALF}
    fm = patch_cross_edge(g, FractionalMatching(tri0), FractionalMatching(tri1), (3, 7))
    assert fm.is_perfect(g)
    with pytest.raises(CertificateError):
        patch_cross_edge(g, FractionalMatching(tri0), FractionalMatching(tri1), (0, 3))


def test_patch_g4_case():
    g84 = recursive_circulant_g84()
    phi = Bijection.random(8, 11)
    g4 = compose(g84, g84, phi).graph
    for v in range(8):
        w = phi(v) + 8
        h0 = delete_faults(g84, FaultSet.of([v]))
        h1 = delete_faults(g84, FaultSet.of([phi(v)]))
        fm0 = fpm_from_hamiltonian_cycle(h0, hamiltonian_cycle(h0).sequence)
        c1 = hamiltonian_cycle(h1).sequence
        fm1 = FractionalMatching({(a + 8, b + 8): x for (a, b), x in
                                  fpm_from_hamiltonian_cycle(h1, c1).weights.items()})
        fm = patch_cross_edge(g4, fm0, fm1, (v, w))
        assert all(fm.vertex_sum(x) == 1 for x in range(16))
