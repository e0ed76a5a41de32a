"""Matching kernel: maximum matchings, perfect / almost-perfect decisions and
the fractional perfect matching (FPM) decider.

A graph G has an FPM exactly when its bipartite double cover has a perfect
matching.  A perfect matching of the cover is a permutation ``sigma`` of the
alive vertices with ``sigma(u)`` adjacent to ``u``; folding it back gives
every edge the weight (number of its two cover copies used) / 2.  Cycles of
``sigma`` of length 2 become weight-1 edges, even cycles are re-split into
alternate weight-1 edges and odd cycles keep weight 1/2, which is the
half-integral normal form returned here.

When the cover has no perfect matching, the failed augmenting search from
an exposed vertex yields a Hall violator T with |N(T)| < |T|.  No vertex of
I = T - N(T) has a neighbor in T, so N(I) lies in K = N(T) - T and every
vertex of I is isolated in G - K, while |I| - |K| = |T| - |N(T)| > 0.  K is
the deficiency witness.

All kernels work on per-vertex neighbor bitmasks so that the preclusion
sweeps can call them without building Graph objects.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence, Union

from .graph import (Graph, GraphError, components,
                    isolated_vertices, iter_bits, new_graph, norm_edge)

HALF = Fraction(1, 2)
ONE = Fraction(1)
ZERO = Fraction(0)
_WEIGHT_TEXT = {ZERO: "0", HALF: "1/2", ONE: "1"}


class CertificateError(ValueError):
    """A matching, fractional matching or witness fails its own check."""


# ---------------------------------------------------------------------------
# certificate types


@dataclass(frozen=True)
class Matching:
    matched_edges: frozenset[tuple[int, int]]
    exposed: frozenset[int]

    @property
    def size(self) -> int:
        return len(self.matched_edges)

    def mate(self) -> dict[int, int]:
        out = {}
        for u, v in self.matched_edges:
            out[u] = v
            out[v] = u
        return out

    def check(self, g: Graph) -> None:
        covered: set[int] = set()
        for u, v in self.matched_edges:
            if not g.has_edge(u, v):
                raise CertificateError(f"matched edge ({u}, {v}) is not live")
            if u in covered or v in covered:
                raise CertificateError(f"edges share a vertex at ({u}, {v})")
            covered |= {u, v}
        if set(g.vertices()) - covered != set(self.exposed):
            raise CertificateError("exposed set does not match the matching")

    def to_json(self) -> dict:
        return {"edges": [list(e) for e in sorted(self.matched_edges)],
                "exposed": sorted(self.exposed)}


@dataclass(frozen=True, eq=False)
class FractionalMatching:
    """Half-integral edge weights; edges absent from ``weights`` weigh 0.

    ``cover`` optionally keeps the double-cover matching (left vertex ->
    right vertex) the weights were folded from, usable as a repair hint.
    """

    weights: Mapping[tuple[int, int], Fraction]
    cover: Optional[Mapping[int, int]] = field(default=None, compare=False)

    def weight(self, u: int, v: int) -> Fraction:
        return self.weights.get(norm_edge(u, v), ZERO)

    def support(self) -> list[tuple[int, int]]:
        return sorted(e for e, w in self.weights.items() if w)

    def vertex_sum(self, v: int) -> Fraction:
        return sum((w for (a, b), w in self.weights.items() if v in (a, b)), ZERO)

    def vertex_sums(self) -> dict[int, Fraction]:
        sums: dict[int, Fraction] = {}
        for (a, b), w in self.weights.items():
            sums[a] = sums.get(a, ZERO) + w
            sums[b] = sums.get(b, ZERO) + w
        return sums

    def check(self, g: Graph, perfect: bool = True) -> None:
        """Raise CertificateError unless this is a (perfect) fractional
        matching of the live graph ``g``.  Exact arithmetic throughout."""
        for (u, v), w in self.weights.items():
            if w not in _WEIGHT_TEXT:
                raise CertificateError(f"weight {w} on ({u}, {v}) is not half-integral")
            if w and not g.has_edge(u, v):
                raise CertificateError(f"positive weight on non-live edge ({u}, {v})")
        sums = self.vertex_sums()
        for v in g.vertices():
            s = sums.get(v, ZERO)
            if s > 1:
                raise CertificateError(f"vertex {v} has load {s} > 1")
            if perfect and s != 1:
                raise CertificateError(f"vertex {v} has load {s} != 1")

    def is_perfect(self, g: Graph) -> bool:
        try:
            self.check(g, perfect=True)
        except CertificateError:
            return False
        return True

    def half_cycles(self) -> list[list[int]]:
        """Vertex sets of the components carrying weight 1/2."""
        half = [e for e, w in self.weights.items() if w == HALF]
        if not half:
            return []
        verts = sorted({v for e in half for v in e})
        idx = {v: i for i, v in enumerate(verts)}
        h = new_graph(len(verts), [(idx[a], idx[b]) for a, b in half])
        return [sorted(verts[i] for i in c) for c in components(h)]

    def to_json(self, g: Optional[Graph] = None) -> dict[str, str]:
        edges = g.live_edges() if g is not None else sorted(self.weights)
        return {f"{u}-{v}": _WEIGHT_TEXT[self.weight(u, v)] for u, v in edges}

    @classmethod
    def from_json(cls, data: Mapping[str, str]) -> "FractionalMatching":
        inv = {t: w for w, t in _WEIGHT_TEXT.items()}
        weights = {}
        for key, text in data.items():
            u, v = (int(x) for x in key.split("-"))
            weights[norm_edge(u, v)] = inv[text]
        return cls(weights)


@dataclass(frozen=True)
class DeficiencyWitness:
    """A vertex set ``s`` whose deletion isolates more than |s| vertices."""

    s: frozenset[int]
    isolated: frozenset[int]

    def check(self, g: Graph) -> None:
        actual = set(isolated_vertices(g, self.s))
        if actual != set(self.isolated):
            raise CertificateError("isolated set does not match G - S")
        if len(actual) <= len(self.s):
            raise CertificateError(f"i(G-S) = {len(actual)} <= |S| = {len(self.s)}")

    def to_json(self) -> dict:
        return {"s": sorted(self.s), "isolated": sorted(self.isolated)}


@dataclass(frozen=True)
class OddComponentsWitness:
    """Tutte-Berge certificate: G - s has more than |s| + (order mod 2) odd
    components, so neither a perfect nor an almost-perfect matching exists."""

    s: frozenset[int]
    odd_components: tuple[frozenset[int], ...]

    def check(self, g: Graph) -> None:
        rest = g.with_masks(g.alive & ~sum(1 << v for v in self.s), g.dead_edges)
        odd = sorted((frozenset(c) for c in components(rest) if len(c) % 2), key=min)
        if sorted(self.odd_components, key=min) != odd:
            raise CertificateError("odd components do not match G - S")
        if len(odd) - len(self.s) <= g.order % 2:
            raise CertificateError("odd components do not exceed |S| + parity")

    def to_json(self) -> dict:
        return {"s": sorted(self.s),
                "odd_components": [sorted(c) for c in sorted(self.odd_components, key=min)]}


# ---------------------------------------------------------------------------
# general maximum matching (Edmonds' blossom algorithm) on bitmask adjacency


def _lca(a, b, base, mate, parent, n):
    seen = [False] * n
    while True:
        a = base[a]
        seen[a] = True
        if mate[a] == -1:
            break
        a = parent[mate[a]]
    while True:
        b = base[b]
        if seen[b]:
            return b
        b = parent[mate[b]]


def _mark_blossom(v, b, child, base, mate, parent, blossom):
    while base[v] != b:
        blossom[base[v]] = True
        blossom[base[mate[v]]] = True
        parent[v] = child
        child = mate[v]
        v = parent[mate[v]]


def edmonds_augment(root: int, adj: Sequence[int], mate: list[int]) -> bool:
    """Search an augmenting path from exposed ``root`` and flip it in place.

    Returns False when none exists; then ``root`` stays exposed in every
    maximum matching reachable from ``mate``.
    """
    n = len(mate)
    parent = [-1] * n
    base = list(range(n))
    used = [False] * n
    used[root] = True
    queue = [root]
    qi = 0
    while qi < len(queue):
        v = queue[qi]
        qi += 1
        m = adj[v]
        while m:
            low = m & -m
            m ^= low
            to = low.bit_length() - 1
            if base[v] == base[to] or mate[v] == to:
                continue
            if to == root or (mate[to] != -1 and parent[mate[to]] != -1):
                cb = _lca(v, to, base, mate, parent, n)
                blossom = [False] * n
                _mark_blossom(v, cb, to, base, mate, parent, blossom)
                _mark_blossom(to, cb, v, base, mate, parent, blossom)
                for i in range(n):
                    if blossom[base[i]]:
                        base[i] = cb
                        if not used[i]:
                            used[i] = True
                            queue.append(i)
            elif parent[to] == -1:
                parent[to] = v
                if mate[to] == -1:
                    w = to
                    while w != -1:
                        pv = parent[w]
                        nxt = mate[pv]
                        mate[w] = pv
                        mate[pv] = w
                        w = nxt
                    return True
                used[mate[to]] = True
                queue.append(mate[to])
    return False


def _greedy(adj: Sequence[int], alive: int, mate: list[int]) -> None:
    for v in iter_bits(alive):
        if mate[v] == -1:
            for w in iter_bits(adj[v]):
                if mate[w] == -1:
                    mate[v] = w
                    mate[w] = v
                    break


def maximum_mate(adj: Sequence[int], alive: int, mate: Optional[list[int]] = None,
                 stop_after_fail: int = -1) -> list[int]:
    """Maximum matching as a mate array (-1 = exposed) over alive vertices.

    ``mate`` is a valid starting matching (modified in place).  With
    ``stop_after_fail`` >= 0 the search gives up once that many exposed
    vertices failed to augment, which is all a PM/APM decision needs.
    """
    n = len(adj)
    if mate is None:
        mate = [-1] * n
        _greedy(adj, alive, mate)
    failed = 0
    for v in iter_bits(alive):
        if mate[v] == -1 and not edmonds_augment(v, adj, mate):
            failed += 1
            if failed == stop_after_fail:
                break
    return mate


def max_matching(g: Graph) -> Matching:
    """A maximum-cardinality matching of the live graph (deterministic)."""
    mate = maximum_mate(g.adjacency_masks(), g.alive)
    edges = frozenset((v, w) for v, w in enumerate(mate) if w > v)
    exposed = frozenset(v for v in g.vertices() if mate[v] == -1)
    return Matching(edges, exposed)


def has_perfect_matching(g: Graph) -> bool:
    if g.order % 2:
        return False
    mate = maximum_mate(g.adjacency_masks(), g.alive, stop_after_fail=1)
    return all(mate[v] != -1 for v in iter_bits(g.alive))


def has_almost_perfect_matching(g: Graph) -> bool:
    if g.order % 2 == 0:
        return False
    mate = maximum_mate(g.adjacency_masks(), g.alive, stop_after_fail=2)
    return sum(mate[v] == -1 for v in iter_bits(g.alive)) == 1


def odd_components_witness(g: Graph) -> OddComponentsWitness:
    """Tutte-Berge witness from the Gallai-Edmonds decomposition.

    D = vertices missed by some maximum matching, A = N(D) - D; the odd
    components of G - A then exceed |A| by the deficiency of G.  Raises
    CertificateError when G has a perfect / almost-perfect matching.
    """
    adj = g.adjacency_masks()
    best = sum(1 for v, w in enumerate(maximum_mate(adj, g.alive)) if w > v)
    if 2 * best >= g.order - 1:
        raise CertificateError("graph has a perfect or almost-perfect matching")
    d_mask = 0
    for v in iter_bits(g.alive):
        rest = g.alive & ~(1 << v)
        sub = [m & rest for m in adj]
        size = sum(1 for u, w in enumerate(maximum_mate(sub, rest)) if w > u)
        if size == best:
            d_mask |= 1 << v
    a_mask = 0
    for v in iter_bits(d_mask):
        a_mask |= adj[v]
    a_mask &= ~d_mask
    rest = g.with_masks(g.alive & ~a_mask, g.dead_edges)
    odd = tuple(frozenset(c) for c in components(rest) if len(c) % 2)
    wit = OddComponentsWitness(frozenset(iter_bits(a_mask)), odd)
    wit.check(g)
    return wit


# ---------------------------------------------------------------------------
# double cover matching (fractional perfect matching decider)


def cover_augment(u: int, adj: Sequence[int], free_r: int, mate_l: list[int],
                  mate_r: list[int]) -> int:
    """Augment the cover matching along a shortest path from exposed left ``u``.

    ``free_r`` is the mask of unmatched right vertices.  Returns the right
    vertex that became matched, or -1 when no augmenting path exists.
    """
    if adj[u] & free_r:
        low = adj[u] & free_r & -(adj[u] & free_r)
        v = low.bit_length() - 1
        mate_l[u] = v
        mate_r[v] = u
        return v
    seen = 0
    parent = {}
    frontier = [u]
    while frontier:
        nxt = []
        for x in frontier:
            m = adj[x] & ~seen
            if not m:
                continue
            hit = m & free_r
            if hit:
                v = (hit & -hit).bit_length() - 1
                end = v
                while True:
                    old = mate_l[x]
                    mate_l[x] = v
                    mate_r[v] = x
                    if x == u:
                        return end
                    v = old
                    x = parent[v]
            seen |= m
            while m:
                low = m & -m
                m ^= low
                v = low.bit_length() - 1
                parent[v] = x
                nxt.append(mate_r[v])
        frontier = nxt
    return -1


def _reached_right(u: int, adj: Sequence[int], mate_r: list[int]) -> int:
    """Right vertices reachable from left ``u`` by alternating paths."""
    seen = 0
    frontier = [u]
    while frontier:
        nxt = []
        for x in frontier:
            m = adj[x] & ~seen
            seen |= m
            nxt.extend(mate_r[v] for v in iter_bits(m))
        frontier = nxt
    return seen


def cover_solve(adj: Sequence[int], alive: int, mate_l: list[int], mate_r: list[int]) -> int:
    """Complete a partial cover matching over ``alive``.

    The arrays must describe a valid partial matching using only live
    pairs.  Returns -1 when every alive vertex got matched, otherwise the
    first left vertex that cannot be matched.
    """
    free_r = alive
    for v in iter_bits(alive):
        if mate_r[v] != -1:
            free_r &= ~(1 << v)
    for u in iter_bits(alive):
        if mate_l[u] == -1:
            v = cover_augment(u, adj, free_r, mate_l, mate_r)
            if v < 0:
                return u
            free_r &= ~(1 << v)
    return -1


def _hall_witness(adj: Sequence[int], u: int, reached: int, mate_r: list[int],
                  g: Graph) -> DeficiencyWitness:
    t_mask = 1 << u
    for v in iter_bits(reached):
        t_mask |= 1 << mate_r[v]
    n_mask = 0
    for x in iter_bits(t_mask):
        n_mask |= adj[x]
    k_mask = n_mask & ~t_mask
    s = frozenset(iter_bits(k_mask))
    wit = DeficiencyWitness(s, frozenset(isolated_vertices(g, s)))
    wit.check(g)
    return wit


def sigma_to_weights(sigma: Mapping[int, int]) -> dict[tuple[int, int], Fraction]:
    """Fold a cover perfect matching into half-integral normal form."""
    weights: dict[tuple[int, int], Fraction] = {}
    done = set()
    for start in sorted(sigma):
        if start in done:
            continue
        cyc = [start]
        done.add(start)
        v = sigma[start]
        while v != start:
            cyc.append(v)
            done.add(v)
            v = sigma[v]
        k = len(cyc)
        if k == 2:
            weights[norm_edge(*cyc)] = ONE
        elif k % 2 == 0:
            for i in range(0, k, 2):
                weights[norm_edge(cyc[i], cyc[i + 1])] = ONE
        else:
            for i in range(k):
                weights[norm_edge(cyc[i], cyc[(i + 1) % k])] = HALF
    return weights


def _hint_arrays(hint, g: Graph, adj: Sequence[int]):
    n = g.n
    mate_l = [-1] * n
    mate_r = [-1] * n
    if hint is None:
        return mate_l, mate_r
    sigma = hint.cover if isinstance(hint, FractionalMatching) else hint
    if sigma is None:
        return mate_l, mate_r
    for u, v in sigma.items():
        if g.alive >> u & 1 and adj[u] >> v & 1:
            mate_l[u] = v
            mate_r[v] = u
    return mate_l, mate_r


def has_fractional_perfect_matching(
        g: Graph, hint: Union[FractionalMatching, Mapping[int, int], None] = None,
) -> tuple[bool, Union[FractionalMatching, DeficiencyWitness]]:
    """Decide whether G has a fractional perfect matching.

    Returns ``(True, FractionalMatching)`` or ``(False, DeficiencyWitness)``.
    ``hint`` is a cover matching from an earlier call (possibly on a graph
    with fewer faults); its still-valid pairs are kept and only the exposed
    vertices are re-augmented.
    """
    adj = g.adjacency_masks()
    mate_l, mate_r = _hint_arrays(hint, g, adj)
    bad = cover_solve(adj, g.alive, mate_l, mate_r)
    if bad >= 0:
        return False, _hall_witness(adj, bad, _reached_right(bad, adj, mate_r), mate_r, g)
    sigma = {u: mate_l[u] for u in iter_bits(g.alive)}
    fm = FractionalMatching(sigma_to_weights(sigma), cover=sigma)
    return True, fm


def bipartite_double_cover(g: Graph) -> Graph:
    """Cover graph: v+ has ID v, v- has ID n + v; edges (u+, v-) and (v+, u-).

    Copies of dead vertices are present in the ID space but dead.
    """
    n = g.n
    edges = []
    for u, v in g.live_edges():
        edges.append((u, n + v))
        edges.append((v, n + u))
    cover = new_graph(2 * n, edges)
    alive = g.alive | (g.alive << n)
    return cover.with_masks(alive, 0)


SCHEINERMAN_LIMIT = 20


def scheinerman_oracle(g: Graph) -> bool:
    """True iff i(G - S) <= |S| for every S, checked over all 2^n subsets."""
    verts = g.vertices()
    if len(verts) > SCHEINERMAN_LIMIT:
        raise GraphError(f"oracle limited to {SCHEINERMAN_LIMIT} vertices, got {len(verts)}")
    adj = g.adjacency_masks()
    alive = g.alive
    k = len(verts)
    bits = [1 << v for v in verts]
    for r in range(k + 1):
        for combo in itertools.combinations(range(k), r):
            s = 0
            for i in combo:
                s |= bits[i]
            rest = alive & ~s
            iso = 0
            for v in iter_bits(rest):
                if not adj[v] & rest:
                    iso += 1
            if iso > r:
                return False
    return True


def fpm_from_hamiltonian_cycle(g: Graph, cycle: Sequence[int]) -> FractionalMatching:
    """Weight 1/2 on every edge of a Hamiltonian cycle of G, 0 elsewhere."""
    cyc = list(cycle)
    if len(cyc) > 1 and cyc[0] == cyc[-1]:
        cyc = cyc[:-1]
    if len(cyc) < 3 or len(set(cyc)) != len(cyc) or set(cyc) != set(g.vertices()):
        raise GraphError("sequence is not a Hamiltonian cycle: vertex coverage")
    weights = {e: ZERO for e in g.live_edges()}
    for a, b in zip(cyc, cyc[1:] + cyc[:1]):
        if not g.has_edge(a, b):
            raise GraphError(f"sequence is not a Hamiltonian cycle: no edge ({a}, {b})")
        weights[norm_edge(a, b)] = HALF
    fm = FractionalMatching(weights)
    fm.check(g)
    return fm


def patch_cross_edge(g: Graph, fm0: FractionalMatching, fm1: FractionalMatching,
                     cross: tuple[int, int]) -> FractionalMatching:
    """Glue perfect fractional matchings of the two parts (with the cross
    edge's endpoints removed) through the cross edge vv' at weight 1.

    Every other live edge of ``g`` not carried by fm0/fm1 gets weight 0.
    The result is checked to be perfect on ``g``.
    """
    v, w = cross
    if not g.has_edge(v, w):
        raise CertificateError(f"cross edge ({v}, {w}) is not live")
    s0 = set(fm0.support())
    s1 = set(fm1.support())
    if s0 & s1:
        raise CertificateError("fractional matchings overlap")
    touched0 = {x for e in s0 for x in e}
    touched1 = {x for e in s1 for x in e}
    if touched0 & touched1:
        raise CertificateError("fractional matchings share vertices")
    if {v, w} & (touched0 | touched1):
        raise CertificateError("cross edge endpoints must be excluded from both parts")
    weights = {e: ZERO for e in g.live_edges()}
    for part in (fm0, fm1):
        for e in part.support():
            if e not in weights:
                raise CertificateError(f"edge {e} is not live in the composed graph")
            weights[e] = part.weight(*e)
    weights[norm_edge(v, w)] = ONE
    fm = FractionalMatching(weights)
    fm.check(g)
    return fm
