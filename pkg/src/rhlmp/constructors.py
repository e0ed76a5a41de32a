"""Builders for G(8,4), the one-to-one composition G0 (+)_phi G1 and RHL_m.

Composition trees are laid out left-to-right, bottom-up: an m-dimensional
graph is built from 2**(m-3) copies of G(8,4), numbered 0, 1, ... from the
left, and copy ``k`` owns vertex IDs ``8k .. 8k+7``.  Level 4 pairs copies
(0,1), (2,3), ...; level 5 pairs the level-4 results, and so on.  A
bijection sequence lists the 2**(m-3) - 1 bijections of all compositions,
lowest level first and left to right inside a level.

Random bijections come from :class:`random.Random` (Mersenne Twister)
seeded with the given integer, shuffled with ``Random.shuffle`` in the same
tree order, so a seed reproduces the same graph on every platform.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence, Union

from .graph import Graph, GraphError, new_graph, norm_edge


class BijectionError(GraphError):
    pass


@dataclass(frozen=True)
class Bijection:
    """A permutation sending vertex ``v`` of G0 to vertex ``mapping[v]`` of G1
    (both in local IDs ``0..len-1``)."""

    mapping: tuple[int, ...]

    def __post_init__(self):
        mapping = tuple(int(x) for x in self.mapping)
        if sorted(mapping) != list(range(len(mapping))):
            raise BijectionError(f"not a permutation: {list(mapping)}")
        object.__setattr__(self, "mapping", mapping)

    def __len__(self):
        return len(self.mapping)

    def __call__(self, v: int) -> int:
        return self.mapping[v]

    def inverse(self) -> "Bijection":
        inv = [0] * len(self.mapping)
        for v, w in enumerate(self.mapping):
            inv[w] = v
        return Bijection(tuple(inv))

    def compose(self, after: "Bijection") -> "Bijection":
        """``after`` applied to the result of ``self``."""
        return Bijection(tuple(after(w) for w in self.mapping))

    @classmethod
    def identity(cls, n: int) -> "Bijection":
        return cls(tuple(range(n)))

    @classmethod
    def random(cls, n: int, rng: Union[int, random.Random, None] = None) -> "Bijection":
        if not isinstance(rng, random.Random):
            rng = random.Random(rng)
        perm = list(range(n))
        rng.shuffle(perm)
        return cls(tuple(perm))

    def to_list(self) -> list[int]:
        return list(self.mapping)


@dataclass(frozen=True, eq=False)
class ComposedGraph:
    """G0 (+)_phi G1 with the parts, the bijection and the cross edges E_C.

    ``children`` holds the two composed operands (each a Graph or a
    ComposedGraph) in local IDs; ``offset`` is the ID shift of G1.
    """

    graph: Graph
    part0: frozenset[int]
    part1: frozenset[int]
    phi: Bijection
    cross_edges: tuple[tuple[int, int], ...]
    children: tuple = field(default=(), repr=False)

    @property
    def offset(self) -> int:
        return len(self.part0)

    @property
    def dimension(self) -> int:
        return self.graph.n.bit_length() - 1

    def tree_bijections(self) -> list[Bijection]:
        """Every bijection of the composition tree, bottom-up, left-to-right."""
        levels: list[list[Bijection]] = []

        def walk(node, depth):
            if not isinstance(node, ComposedGraph):
                return
            for child in node.children:
                walk(child, depth + 1)
            while len(levels) <= depth:
                levels.append([])
            levels[depth].append(node.phi)

        walk(self, 0)
        out: list[Bijection] = []
        for level in reversed(levels):
            out.extend(level)
        return out

    def cross_edges_by_level(self) -> dict[int, list[tuple[int, int]]]:
        """Cross edges of every composition in the tree, keyed by dimension
        of the composed graph, in global IDs."""
        out: dict[int, list[tuple[int, int]]] = {}

        def walk(node, base):
            if not isinstance(node, ComposedGraph):
                return
            out.setdefault(node.dimension, []).extend(
                (u + base, v + base) for u, v in node.cross_edges)
            walk(node.children[0], base)
            walk(node.children[1], base + node.offset)

        walk(self, 0)
        return {k: sorted(v) for k, v in sorted(out.items())}


def recursive_circulant_g84() -> Graph:
    """G(8,4): vertices 0..7, v_i ~ v_j iff j = i+1 or i+4 (mod 8)."""
    edges = {norm_edge(i, (i + 1) % 8) for i in range(8)}
    edges |= {norm_edge(i, (i + 4) % 8) for i in range(8)}
    return new_graph(8, sorted(edges))


def g84_edge_kind(u: int, v: int) -> str:
    """``"boundary"`` for octagon edges (i, i+1), ``"diagonal"`` for (i, i+4)."""
    d = (v - u) % 8
    if d in (1, 7):
        return "boundary"
    if d == 4:
        return "diagonal"
    raise GraphError(f"({u}, {v}) is not an edge of G(8,4)")


def is_boundary_edge(u: int, v: int) -> bool:
    return g84_edge_kind(u, v) == "boundary"


def is_diagonal_edge(u: int, v: int) -> bool:
    return g84_edge_kind(u, v) == "diagonal"


def _underlying(g: Union[Graph, ComposedGraph]) -> Graph:
    return g.graph if isinstance(g, ComposedGraph) else g


def compose(g0: Union[Graph, ComposedGraph], g1: Union[Graph, ComposedGraph],
            phi: Bijection) -> ComposedGraph:
    """Join two equal-order graphs by the perfect matching v -- phi(v).

    G1's vertex IDs are shifted by |V(G0)|.  Both operands must be
    undeleted graphs.
    """
    a, b = _underlying(g0), _underlying(g1)
    if a.n != b.n:
        raise GraphError(f"order mismatch: {a.n} vs {b.n}")
    if not isinstance(phi, Bijection):
        phi = Bijection(tuple(phi))
    if len(phi) != a.n:
        raise BijectionError(f"bijection has length {len(phi)}, expected {a.n}")
    if a.alive != (1 << a.n) - 1 or b.alive != (1 << b.n) - 1 or a.dead_edges or b.dead_edges:
        raise GraphError("compose expects graphs without deletions")
    off = a.n
    cross = tuple((v, phi(v) + off) for v in range(a.n))
    edges = list(a.live_edges())
    edges += [(u + off, v + off) for u, v in b.live_edges()]
    edges += cross
    g = new_graph(2 * off, edges)
    return ComposedGraph(
        graph=g,
        part0=frozenset(range(off)),
        part1=frozenset(range(off, 2 * off)),
        phi=phi,
        cross_edges=cross,
        children=(g0, g1),
    )


def bijection_count(m: int) -> int:
    """Number of bijections needed to build an m-dimensional RHL graph."""
    if m < 3:
        raise GraphError(f"restricted HL-graphs need m >= 3, got {m}")
    return 2 ** (m - 3) - 1


def build_rhl(m: int, phis: Union[Sequence[Bijection], str, None] = None,
              seed: int | None = None) -> Union[Graph, ComposedGraph]:
    """Build an m-dimensional restricted hypercube-like graph.

    ``phis`` is either a full bijection sequence in tree order, the string
    ``"identity"`` or ``None``.  With ``seed`` given (and ``phis`` None) all
    bijections are drawn at random from that seed; with neither, every
    bijection is the identity.  m = 3 returns G(8,4) itself.
    """
    need = bijection_count(m)
    if m == 3:
        if phis not in (None, "identity") and len(phis) != 0:
            raise BijectionError("G(8,4) takes no bijections")
        return recursive_circulant_g84()

    sizes = []
    for level in range(4, m + 1):
        sizes += [2 ** (level - 1)] * 2 ** (m - level)
    if phis is None and seed is not None:
        rng = random.Random(seed)
        seq = [Bijection.random(s, rng) for s in sizes]
    elif phis is None or phis == "identity":
        seq = [Bijection.identity(s) for s in sizes]
    else:
        seq = [p if isinstance(p, Bijection) else Bijection(tuple(p)) for p in phis]
        if len(seq) != need:
            raise BijectionError(f"m={m} needs {need} bijections, got {len(seq)}")
        for p, s in zip(seq, sizes):
            if len(p) != s:
                raise BijectionError(f"bijection of length {len(p)} where {s} expected")

    nodes: list = [recursive_circulant_g84() for _ in range(2 ** (m - 3))]
    it = iter(seq)
    while len(nodes) > 1:
        nodes = [compose(nodes[i], nodes[i + 1], next(it)) for i in range(0, len(nodes), 2)]
    return nodes[0]


def rhl_graph(m: int, phis=None, seed=None) -> Graph:
    return _underlying(build_rhl(m, phis, seed))


def hypercube(n: int) -> Graph:
    """Q_n: vertices 0..2**n-1, adjacent iff their IDs differ in one bit."""
    if n < 0:
        raise GraphError(f"dimension must be >= 0, got {n}")
    size = 1 << n
    edges = [(v, v ^ (1 << b)) for v in range(size) for b in range(n) if v < v ^ (1 << b)]
    return new_graph(size, edges)


def leaf_edge_kinds(g: Union[Graph, ComposedGraph]) -> dict[tuple[int, int], str]:
    """Tag every edge as boundary/diagonal (inside a G(8,4) copy) or
    ``cross<d>`` where d is the dimension of the composition adding it."""
    if isinstance(g, Graph):
        if g.n != 8:
            raise GraphError("edge kinds are only defined for RHL graphs")
        return {e: g84_edge_kind(*e) for e in g.live_edges()}
    tags: dict[tuple[int, int], str] = {}
    for d, es in g.cross_edges_by_level().items():
        for e in es:
            tags[e] = f"cross{d}"
    for (u, v) in g.graph.live_edges():
        if (u, v) not in tags:
            if u // 8 != v // 8:
                raise GraphError(f"edge ({u}, {v}) is neither local nor cross")
            tags[(u, v)] = g84_edge_kind(u % 8, v % 8)
    return tags
