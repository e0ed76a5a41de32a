import itertools
import json
import random
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from rhlmp.constructors import Bijection, compose, recursive_circulant_g84, rhl_graph
from rhlmp.graph import FaultError, FaultSet, delete_faults, min_degree, new_graph
from rhlmp.preclusion import (PreclusionKind, SweepKernel, certificate, is_trivial_solution,
                              iter_fault_sets, optimal_set_structure, preclusion_number,
                              sample_fault_sets, survives, universe)

from conftest import small_graphs

KINDS = list(PreclusionKind)


def test_kind_parse():
    assert PreclusionKind.parse("FSMP") is PreclusionKind.FSMP
    assert PreclusionKind.FSMP.vertex_faults and PreclusionKind.FSMP.fractional
    assert not PreclusionKind.MP.vertex_faults and not PreclusionKind.MP.fractional
    with pytest.raises(ValueError):
        PreclusionKind.parse("xmp")


def test_universe_order(g84):
    u = universe(g84, "fsmp")
    assert len(u) == 20 and u.vertices == tuple(range(8))
    f = u.fault_set((2, 8))
    assert f == FaultSet.of([2], [(0, 1)])
    assert u.positions(f) == (2, 8)
    assert len(universe(g84, "fmp")) == 12


def test_survives_examples(g84):
    assert survives(g84, FaultSet.of(), "fsmp")
    assert not survives(g84, FaultSet.of([2], [(0, 1)]), "fsmp")
    # vertex 3 is adjacent to neither endpoint of (0, 1)
    assert survives(g84, FaultSet.of([3], [(0, 1)]), "fsmp")
    with pytest.raises(FaultError):
        survives(g84, FaultSet.of([2]), "fmp")


def test_integral_kinds_use_parity(g84):
    # odd order: an almost-perfect matching is enough
    assert survives(g84, FaultSet.of([0]), "smp")
    p3 = new_graph(3, [(0, 1), (1, 2)])
    assert survives(p3, FaultSet.of(), "smp")
    assert not survives(p3, FaultSet.of([1]), "smp")
    assert survives(p3, FaultSet.of([0]), "smp")


def test_vertex_deletion_can_restore():
    # an edge plus an isolated vertex has no FPM; deleting the isolated vertex fixes that
    g = new_graph(3, [(0, 1)])
    assert not survives(g, FaultSet.of(), "fsmp")
    assert survives(g, FaultSet.of([2]), "fsmp")
    kernel = SweepKernel(g, "fsmp")
    assert kernel.root().dead
    assert kernel.survives_positions((2,))
    assert not kernel.survives_positions((2, 3))


def test_sweep_revives_dead_prefix():
    # deleting vertex 0 kills the FPM; deleting 4 as well restores it
    g = new_graph(5, [(0, 1), (0, 2), (1, 2), (0, 3), (3, 4)])
    kernel = SweepKernel(g, "fsmp")
    for k in (1, 2, 3):
        got = [h for first in range(len(kernel.uni))
               for h in kernel.sweep_block(first, k, None).hits]
        want = [c for c in itertools.combinations(range(len(kernel.uni)), k)
                if not survives(g, kernel.uni.fault_set(c), "fsmp")]
        assert got == want


def test_numbers_g84(g84):
    assert preclusion_number(g84, "fsmp", 3).number == 2
    assert preclusion_number(g84, "fmp", 4).number == 3
    assert preclusion_number(g84, "mp", 4).number == 3
    assert preclusion_number(g84, "smp", 4).number == 3


def test_budget_exhausted(g84):
    res = preclusion_number(g84, "fmp", 2)
    assert res.number is None and res.lower_bound == 3
    assert [s.survivors for s in res.swept_sizes] == [12, 66]


def test_trivial_solutions(g84):
    assert is_trivial_solution(g84, FaultSet.of(edges=[(0, 1), (0, 7), (0, 4)]))
    assert not is_trivial_solution(g84, FaultSet.of(edges=[(0, 1), (0, 7)]))
    assert not is_trivial_solution(g84, FaultSet.of(edges=[(0, 1), (2, 3), (4, 5)]))
    with pytest.raises(FaultError):
        is_trivial_solution(g84, FaultSet.of([1], [(0, 1)]))


def test_structure_g84(g84):
    res = preclusion_number(g84, "fsmp", 3, all_witnesses=True)
    st_ = optimal_set_structure(g84, "fsmp", res)
    assert st_["all_match"] and not st_["diagonal_used"]
    assert st_["composition"] == {"1v+1e": st_["count"]}
    mp = preclusion_number(g84, "mp", 3, all_witnesses=True)
    rep = optimal_set_structure(g84, "mp", mp)
    assert rep["count"] == len(mp.optimal_sets) and rep["trivial"] == 8


@pytest.mark.parametrize("kind", KINDS)
def test_certificates_replay(g84, kind):
    res = preclusion_number(g84, kind, 4, all_witnesses=True)
    for f, cert in zip(res.optimal_sets, res.certificates):
        h = delete_faults(g84, f)
        cert.check(h)
        assert not survives(g84, f, kind)
        assert certificate(g84, f, kind).to_json() == cert.to_json()


@pytest.mark.parametrize("kind", KINDS)
def test_sweep_matches_direct_enumeration(g84, kind):
    res = preclusion_number(g84, kind, 4, all_witnesses=True)
    k = res.number
    direct = [f for f in iter_fault_sets(g84, kind, k) if not survives(g84, f, kind)]
    assert direct == res.optimal_sets
    for j in range(1, k):
        assert all(survives(g84, f, kind) for f in iter_fault_sets(g84, kind, j))


@pytest.mark.parametrize("kind", ["fsmp", "smp"])
def test_kernel_agrees_with_survives_on_g4(kind):
    g = compose(recursive_circulant_g84(), recursive_circulant_g84(), Bijection.random(8, 4)).graph
    kernel = SweepKernel(g, kind)
    for size in (2, 3, 4):
        for f in sample_fault_sets(g, kind, size, 150, size):
            if kind == "fsmp":
                assert kernel.survives_positions(kernel.uni.positions(f)) == survives(g, f, kind)


@settings(max_examples=60, deadline=None)
@given(small_graphs(max_n=9, min_n=1), st.integers(1, 3))
def test_kernel_property(g, size):
    kernel = SweepKernel(g, "fsmp")
    for combo in itertools.islice(itertools.combinations(range(len(kernel.uni)), size), 60):
        f = kernel.uni.fault_set(combo)
        assert kernel.survives_positions(combo) == survives(g, f, "fsmp")


@settings(max_examples=40, deadline=None)
@given(small_graphs(max_n=8, min_n=2), st.sampled_from(["fmp", "fsmp"]))
def test_number_matches_brute_force(g, kind):
    if not g.size:
        return
    budget = 3
    res = preclusion_number(g, kind, budget)
    expect = None
    if not survives(g, FaultSet.of(), kind):
        expect = 0
    else:
        for k in range(1, budget + 1):
            if any(not survives(g, f, kind) for f in iter_fault_sets(g, kind, k)):
                expect = k
                break
    assert res.number == expect


@pytest.mark.parametrize("kind", ["fsmp", "smp"])
def test_monotone_under_edge_additions(kind):
    g = compose(recursive_circulant_g84(), recursive_circulant_g84(), Bijection.random(8, 8)).graph
    uni = universe(g, kind)
    rnd = random.Random(3)
    killers = [f for f in sample_fault_sets(g, kind, 4, 3000, 5) if not survives(g, f, kind)]
    assert killers
    for f in killers[:60]:
        pos = set(uni.positions(f))
        extra = rnd.choice([p for p in range(len(uni.vertices), len(uni)) if p not in pos])
        assert not survives(g, uni.fault_set(sorted(pos | {extra})), kind)


def test_deterministic_across_workers(g84):
    g = compose(g84, g84, Bijection.random(8, 2)).graph
    a = preclusion_number(g, "fsmp", 4, all_witnesses=True, workers=1)
    b = preclusion_number(g, "fsmp", 4, all_witnesses=True, workers=2)
    c = preclusion_number(g, "fsmp", 4, workers=3)
    assert json.dumps(a.to_json(timing=False)) == json.dumps(b.to_json(timing=False))
    assert c.optimal_sets[0] == a.optimal_sets[0]
    assert c.to_json(timing=False) == preclusion_number(g, "fsmp", 4).to_json(timing=False)


@pytest.mark.parametrize("seed", [0, 5])
def test_bounds_on_g4(seed):
    g84 = recursive_circulant_g84()
    g = compose(g84, g84, Bijection.random(8, seed)).graph
    assert 3 <= preclusion_number(g, "fsmp", 4).number <= 4
    assert preclusion_number(g, "fmp", 4).number == 4 == min_degree(g)
    assert preclusion_number(g, "smp", 4).number == 4


def test_start_skips_sizes(g84):
    res = preclusion_number(g84, "fmp", 4, start=3)
    assert res.number == 3 and not res.exhaustive


@pytest.mark.slow
def test_g5_size4_sample_and_trivial():
    g = rhl_graph(5, seed=1)
    kernel = SweepKernel(g, "fsmp")
    assert len(kernel.uni) == 112
    sets = sample_fault_sets(g, "fsmp", 4, 2000, 9)
    assert all(kernel.survives_positions(kernel.uni.positions(f)) for f in sets)
    star = FaultSet.of(edges=[(min(0, w), max(0, w)) for w in g.neighbors(0)])
    assert not survives(g, star, "fsmp")
    assert comb(112, 4) == 6210820
