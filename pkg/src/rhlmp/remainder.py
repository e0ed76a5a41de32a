"""Remainder sets of G(8,4) and the fsmp(G^4) predictor.

Deleting an optimal FSMP set F = {u, e} from G(8,4) and then three more
vertices S can leave four isolated vertices; such a 4-set is a remainder
set.  For G^4 = G0 (+)_phi G1 with both parts G(8,4), fsmp(G^4) = 3 exactly
when some remainder set R of one part leaves at most one edge in the other
part after deleting the cross neighbors of R; otherwise fsmp(G^4) = 4.

The predictor checks both orientations (remainder set in G0 and in G1),
since a size-3 fault set may put its vertex in either part.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from .constructors import Bijection, compose, recursive_circulant_g84
from .graph import (FaultSet, Graph, GraphError, degree_sequence, delete_faults,
                    is_bipartite, isolated_vertices)
from .matching import DeficiencyWitness
from .preclusion import PreclusionKind, preclusion_number, survives


@dataclass(frozen=True)
class RemainderSet:
    vertices: frozenset[int]
    fault: FaultSet
    s: frozenset[int]

    def replay(self, g3: Graph) -> list[int]:
        """Isolated vertices of G - F - S (should equal ``vertices``)."""
        return isolated_vertices(delete_faults(g3, self.fault), self.s)

    def to_json(self) -> dict:
        return {"vertices": sorted(self.vertices), "fault": self.fault.to_dict(),
                "s": sorted(self.s)}


def _check_g84_like(g: Graph) -> None:
    if (g.order != 8 or g.size != 12 or degree_sequence(g) != [3] * 8
            or is_bipartite(g)):
        raise GraphError("expected a graph isomorphic to G(8,4)")


def enumerate_remainder_sets(g3: Graph) -> list[RemainderSet]:
    """All distinct remainder sets, each with the first (F, S) producing it.

    F runs over the optimal FSMP sets in sweep order, S over 3-subsets of
    the alive vertices of G - F in lexicographic order.
    """
    _check_g84_like(g3)
    res = preclusion_number(g3, PreclusionKind.FSMP, 3, all_witnesses=True)
    found: dict[frozenset[int], RemainderSet] = {}
    for f in res.optimal_sets:
        h = delete_faults(g3, f)
        for s in itertools.combinations(h.vertices(), 3):
            iso = isolated_vertices(h, s)
            if len(iso) == 4:
                key = frozenset(iso)
                if key not in found:
                    found[key] = RemainderSet(key, f, frozenset(s))
    return sorted(found.values(), key=lambda r: sorted(r.vertices))


def automorphisms(g: Graph) -> list[tuple[int, ...]]:
    """All automorphisms of a small graph as permutation tuples."""
    verts = g.vertices()
    edges = set(g.live_edges())
    adj = g.live_adjacency()
    out = []

    def extend(mapping, used):
        if len(mapping) == len(verts):
            out.append(tuple(mapping[v] for v in verts))
            return
        v = verts[len(mapping)]
        for w in verts:
            if w in used or len(adj[w]) != len(adj[v]):
                continue
            if all(((min(mapping[x], w), max(mapping[x], w)) in edges)
                   == ((min(x, v), max(x, v)) in edges) for x in mapping):
                mapping[v] = w
                extend(mapping, used | {w})
                del mapping[v]

    extend({}, frozenset())
    return out


def remainder_orbits(g3: Graph, sets: Sequence[RemainderSet]) -> list[list[frozenset[int]]]:
    """Partition remainder sets into orbits under Aut(G)."""
    auts = automorphisms(g3)
    left = {r.vertices for r in sets}
    orbits = []
    for r in sets:
        if r.vertices not in left:
            continue
        orbit = {frozenset(a[v] for v in r.vertices) for a in auts}
        members = sorted((x for x in orbit if x in left), key=sorted)
        left -= orbit
        orbits.append(members)
    return orbits


def phi_image(phi: Bijection, r) -> frozenset[int]:
    verts = r.vertices if isinstance(r, RemainderSet) else r
    return frozenset(phi(v) for v in verts)


def _edges_left(g1: Graph, removed: frozenset[int]) -> list[tuple[int, int]]:
    return [e for e in g1.live_edges() if e[0] not in removed and e[1] not in removed]


def g4_condition(g1: Graph, phi: Bijection,
                 remainder_sets: Sequence[RemainderSet]) -> tuple[bool, Optional[RemainderSet]]:
    """Is there a remainder set R with G1 - phi(R) having at most one edge?"""
    for r in remainder_sets:
        if len(_edges_left(g1, phi_image(phi, r))) <= 1:
            return True, r
    return False, None


@lru_cache(maxsize=1)
def _g84_remainders() -> tuple[RemainderSet, ...]:
    return tuple(enumerate_remainder_sets(recursive_circulant_g84()))


@dataclass(frozen=True)
class G4Prediction:
    value: int
    side: Optional[int]  # part holding the remainder set (0 or 1)
    remainder: Optional[RemainderSet]
    fault: Optional[FaultSet]  # size-3 precluding set in G^4 IDs
    witness: Optional[DeficiencyWitness]

    def to_json(self) -> dict:
        return {
            "predicted_fsmp": self.value,
            "side": self.side,
            "witness_R": None if self.remainder is None else sorted(self.remainder.vertices),
            "fault": None if self.fault is None else self.fault.to_dict(),
            "deficiency": None if self.witness is None else self.witness.to_json(),
        }


def _assemble(g4: Graph, r: RemainderSet, phi: Bijection, g_other: Graph,
              side: int) -> tuple[FaultSet, DeficiencyWitness]:
    """F = {u, e} on the remainder side plus the leftover edge on the other
    side; S = S0 + phi(R).  Offsets map part-local IDs to G^4 IDs."""
    here, there = (0, 8) if side == 0 else (8, 0)
    image = phi_image(phi, r)
    rest = _edges_left(g_other, image)
    (u,) = tuple(r.fault.vertices)
    ((a, b),) = tuple(r.fault.edges)
    edges = [(a + here, b + here)] + [(x + there, y + there) for x, y in rest]
    f = FaultSet.of([u + here], edges)
    s = frozenset({x + here for x in r.s} | {x + there for x in image})
    w = DeficiencyWitness(s, frozenset(isolated_vertices(delete_faults(g4, f), s)))
    w.check(delete_faults(g4, f))
    return f, w


def predict_fsmp_g4(g0: Graph, g1: Graph, phi: Bijection) -> G4Prediction:
    """3 when the remainder-set condition holds in either orientation, else 4.

    Both parts must be G(8,4) in its standard labeling.  A positive
    prediction is backed by an explicit size-3 FSMP set of G0 (+)_phi G1,
    replayed against the fractional survival check.
    """
    base = recursive_circulant_g84()
    if g0 != base or g1 != base:
        raise GraphError("predict_fsmp_g4 expects both parts to be G(8,4)")
    rems = _g84_remainders()
    g4 = compose(g0, g1, phi).graph
    for side, (mapping, other) in enumerate(((phi, g1), (phi.inverse(), g0))):
        ok, r = g4_condition(other, mapping, rems)
        if ok:
            f, w = _assemble(g4, r, mapping, other, side)
            if survives(g4, f, PreclusionKind.FSMP):
                raise AssertionError("assembled witness does not preclude")
            return G4Prediction(3, side, r, f, w)
    return G4Prediction(4, None, None, None, None)
