import pytest

from rhlmp.constructors import Bijection, compose, hypercube, recursive_circulant_g84
from rhlmp.graph import FaultSet, GraphError, delete_faults, isolated_vertices
from rhlmp.preclusion import PreclusionKind, preclusion_number, survives
from rhlmp.remainder import (automorphisms, enumerate_remainder_sets, g4_condition, phi_image,
                             predict_fsmp_g4, remainder_orbits)


@pytest.fixture(scope="module")
def rems():
    return enumerate_remainder_sets(recursive_circulant_g84())


def test_known_remainder_set(rems):
    by_verts = {r.vertices: r for r in rems}
    r = by_verts[frozenset({0, 1, 3, 6})]
    g84 = recursive_circulant_g84()
    h = delete_faults(g84, FaultSet.of([2], [(0, 1)]))
    assert isolated_vertices(h, {4, 5, 7}) == [0, 1, 3, 6]
    assert r.replay(g84) == [0, 1, 3, 6]


def test_every_remainder_set_replays(rems, g84):
    assert rems
    for r in rems:
        assert len(r.vertices) == 4 and len(r.s) == 3
        assert r.replay(g84) == sorted(r.vertices)
        assert not survives(g84, r.fault, "fsmp")


def test_single_orbit(rems, g84):
    assert len(automorphisms(g84)) == 16
    orbits = remainder_orbits(g84, rems)
    assert len(orbits) == 1 and len(orbits[0]) == len(rems) == 8


def test_rejects_other_graphs():
    with pytest.raises(GraphError):
        enumerate_remainder_sets(hypercube(3))


def test_phi_image():
    r = frozenset({0, 1, 3, 6})
    assert phi_image(Bijection.identity(8), r) == r
    assert phi_image(Bijection(tuple((i + 1) % 8 for i in range(8))), r) == {1, 2, 4, 7}
    assert phi_image(Bijection(tuple(7 - i for i in range(8))), r) == {7, 6, 4, 1}


def test_condition_identity(rems, g84):
    ok, r = g4_condition(g84, Bijection.identity(8), rems)
    assert ok and sorted(r.vertices) == [0, 1, 3, 6]
    assert g4_condition(g84, Bijection.identity(8), [])[0] is False


def test_predict_identity(g84):
    p = predict_fsmp_g4(g84, g84, Bijection.identity(8))
    assert p.value == 3 and sorted(p.remainder.vertices) == [0, 1, 3, 6]
    g4 = compose(g84, g84, Bijection.identity(8)).graph
    assert p.fault.size == 3 and not survives(g4, p.fault, "fsmp")
    assert len(p.witness.s) == 7 and len(p.witness.isolated) == 8
    p.witness.check(delete_faults(g4, p.fault))


def test_condition_can_fail(rems, g84):
    failing = [s for s in range(60)
               if not g4_condition(g84, Bijection.random(8, s), rems)[0]]
    assert failing
    p = predict_fsmp_g4(g84, g84, Bijection.random(8, failing[0]))
    assert p.value in (3, 4)


@pytest.mark.parametrize("seed", range(0, 60, 3))
def test_prediction_matches_brute_force(g84, seed):
    phi = Bijection.random(8, seed)
    p = predict_fsmp_g4(g84, g84, phi)
    g4 = compose(g84, g84, phi).graph
    assert p.value == preclusion_number(g4, PreclusionKind.FSMP, 4).number


def test_invariant_under_automorphisms(g84):
    auts = [Bijection(a) for a in automorphisms(g84)]
    for seed in range(8):
        phi = Bijection.random(8, 100 + seed)
        base = predict_fsmp_g4(g84, g84, phi).value
        for a in auts:
            assert predict_fsmp_g4(g84, g84, phi.compose(a)).value == base


def test_predict_requires_g84(g84):
    with pytest.raises(GraphError):
        predict_fsmp_g4(g84, hypercube(3), Bijection.identity(8))
