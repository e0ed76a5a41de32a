"""Simple undirected graphs with fault deletion by masking.

A :class:`Graph` keeps its full base structure (vertex count, the sorted
edge list and per-vertex neighbor tuples) and two deletion masks: the set
of alive vertices and the set of dead edge indices.  Deleting faults only
produces a new pair of masks, so vertex IDs never change and a view costs
O(|F|) to derive.

Edges are stored as ``(u, v)`` with ``u < v`` and receive a dense index in
lexicographic order at construction time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator


class GraphError(ValueError):
    """Base class for malformed graph input."""


class VertexRangeError(GraphError):
    pass


class SelfLoopError(GraphError):
    pass


class DuplicateEdgeError(GraphError):
    pass


class FaultError(GraphError):
    """A fault set refers to something that is not alive in the graph."""


def norm_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bits_to_list(mask: int) -> list[int]:
    return list(iter_bits(mask))


def list_to_bits(items: Iterable[int]) -> int:
    mask = 0
    for i in items:
        mask |= 1 << i
    return mask


@dataclass(frozen=True)
class FaultSet:
    """Vertices and edges to delete; ``size`` counts both parts."""

    vertices: frozenset[int] = frozenset()
    edges: frozenset[tuple[int, int]] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "vertices", frozenset(self.vertices))
        object.__setattr__(
            self, "edges", frozenset(norm_edge(*e) for e in self.edges))

    @classmethod
    def of(cls, vertices: Iterable[int] = (), edges: Iterable[tuple[int, int]] = ()) -> "FaultSet":
        return cls(frozenset(vertices), frozenset(norm_edge(*e) for e in edges))

    @property
    def size(self) -> int:
        return len(self.vertices) + len(self.edges)

    def __len__(self) -> int:
        return self.size

    def sorted_vertices(self) -> list[int]:
        return sorted(self.vertices)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def to_dict(self) -> dict:
        return {"vertices": self.sorted_vertices(),
                "edges": [list(e) for e in self.sorted_edges()]}

    @classmethod
    def from_dict(cls, data: dict) -> "FaultSet":
        return cls.of(data.get("vertices", ()), (tuple(e) for e in data.get("edges", ())))


@dataclass(frozen=True)
class _Base:
    n: int
    edges: tuple[tuple[int, int], ...]
    edge_index: dict
    nbrs: tuple[tuple[int, ...], ...]
    nbr_masks: tuple[int, ...]
    # incident edge indices per vertex
    incident: tuple[tuple[int, ...], ...]


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable simple graph plus vertex/edge deletion masks.

    ``alive`` is a bitmask over vertex IDs and ``dead_edges`` a bitmask over
    dense edge indices.  An edge is live when it is not dead and both its
    endpoints are alive.
    """

    _base: _Base = field(repr=False)
    alive: int
    dead_edges: int = 0

    # ---- basic structure -------------------------------------------------

    @property
    def n(self) -> int:
        return self._base.n

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        """All base edges in dense-index order, dead ones included."""
        return self._base.edges

    def edge_id(self, u: int, v: int) -> int:
        try:
            return self._base.edge_index[norm_edge(u, v)]
        except KeyError:
            raise FaultError(f"no edge ({u}, {v}) in graph") from None

    def is_alive(self, v: int) -> bool:
        return 0 <= v < self.n and bool(self.alive >> v & 1)

    def is_live_edge_id(self, i: int) -> bool:
        u, v = self._base.edges[i]
        return not (self.dead_edges >> i & 1) and bool(self.alive >> u & 1) and bool(self.alive >> v & 1)

    def has_edge(self, u: int, v: int) -> bool:
        i = self._base.edge_index.get(norm_edge(u, v))
        return i is not None and self.is_live_edge_id(i)

    def vertices(self) -> list[int]:
        return bits_to_list(self.alive)

    @property
    def order(self) -> int:
        return self.alive.bit_count()

    def live_edge_ids(self) -> list[int]:
        return [i for i in range(len(self._base.edges)) if self.is_live_edge_id(i)]

    def live_edges(self) -> list[tuple[int, int]]:
        return [self._base.edges[i] for i in self.live_edge_ids()]

    @property
    def size(self) -> int:
        return len(self.live_edge_ids())

    def neighbors(self, v: int) -> list[int]:
        if not self.is_alive(v):
            return []
        return bits_to_list(self.adjacency_masks()[v])

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def incident_edge_ids(self, v: int) -> tuple[int, ...]:
        return self._base.incident[v]

    def adjacency_masks(self) -> list[int]:
        """Live neighbor bitmask per vertex (0 for dead vertices)."""
        alive = self.alive
        masks = [m & alive if alive >> v & 1 else 0
                 for v, m in enumerate(self._base.nbr_masks)]
        dead = self.dead_edges
        edges = self._base.edges
        for i in iter_bits(dead):
            u, v = edges[i]
            masks[u] &= ~(1 << v)
            masks[v] &= ~(1 << u)
        return masks

    def live_adjacency(self) -> dict[int, tuple[int, ...]]:
        masks = self.adjacency_masks()
        return {v: tuple(iter_bits(masks[v])) for v in iter_bits(self.alive)}

    # ---- derived views ---------------------------------------------------

    def full(self) -> "Graph":
        """The same base graph with every deletion undone."""
        return Graph(self._base, (1 << self.n) - 1, 0)

    def with_masks(self, alive: int, dead_edges: int) -> "Graph":
        return Graph(self._base, alive, dead_edges)

    # ---- equality on live adjacency -------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.n == other.n and self.alive == other.alive
                and self.live_edges() == other.live_edges())

    def __hash__(self):
        return hash((self.n, self.alive, tuple(self.live_edges())))

    def __repr__(self):
        return f"Graph(order={self.order}, size={self.size}, n={self.n})"


def new_graph(n: int, edges: Iterable[tuple[int, int]]) -> Graph:
    """Build a graph on vertices ``0..n-1`` with all vertices alive.

    Raises :class:`VertexRangeError`, :class:`SelfLoopError` or
    :class:`DuplicateEdgeError` on bad input.
    """
    if n < 0:
        raise VertexRangeError(f"vertex count must be >= 0, got {n}")
    seen = set()
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise VertexRangeError(f"edge ({u}, {v}) out of range for n={n}")
        if u == v:
            raise SelfLoopError(f"self-loop at vertex {u}")
        e = norm_edge(u, v)
        if e in seen:
            raise DuplicateEdgeError(f"duplicate edge {e}")
        seen.add(e)
    ordered = tuple(sorted(seen))
    index = {e: i for i, e in enumerate(ordered)}
    nbrs: list[list[int]] = [[] for _ in range(n)]
    incident: list[list[int]] = [[] for _ in range(n)]
    for i, (u, v) in enumerate(ordered):
        nbrs[u].append(v)
        nbrs[v].append(u)
        incident[u].append(i)
        incident[v].append(i)
    base = _Base(
        n=n,
        edges=ordered,
        edge_index=index,
        nbrs=tuple(tuple(sorted(x)) for x in nbrs),
        nbr_masks=tuple(list_to_bits(x) for x in nbrs),
        incident=tuple(tuple(x) for x in incident),
    )
    return Graph(base, (1 << n) - 1, 0)


def delete_faults(g: Graph, f: FaultSet) -> Graph:
    """Return G - F.  Every fault must be alive (resp. live) in ``g``.

    An edge of ``f`` may be incident to a vertex of ``f``; it is then simply
    removed twice over.
    """
    alive = g.alive
    for v in f.vertices:
        if not g.is_alive(v):
            raise FaultError(f"vertex {v} is not alive")
        alive &= ~(1 << v)
    dead = g.dead_edges
    for u, v in f.edges:
        i = g.edge_id(u, v)
        if not g.is_live_edge_id(i):
            raise FaultError(f"edge ({u}, {v}) is not live")
        dead |= 1 << i
    return g.with_masks(alive, dead)


def _vertex_mask(g: Graph, s: Iterable[int]) -> int:
    mask = 0
    for v in s:
        if not g.is_alive(v):
            raise FaultError(f"vertex {v} is not alive")
        mask |= 1 << v
    return mask


def isolated_vertices(g: Graph, s: Iterable[int] = ()) -> list[int]:
    """Vertices of G - S with no live neighbor."""
    smask = _vertex_mask(g, s)
    rest = g.alive & ~smask
    masks = g.adjacency_masks()
    return [v for v in iter_bits(rest) if not masks[v] & rest]


def isolated_count(g: Graph, s: Iterable[int] = ()) -> int:
    """i(G - S): the number of isolated vertices after deleting ``s``."""
    return len(isolated_vertices(g, s))


def min_degree(g: Graph) -> int:
    if not g.alive:
        raise GraphError("minimum degree of an empty graph is undefined")
    masks = g.adjacency_masks()
    return min(masks[v].bit_count() for v in iter_bits(g.alive))


def components(g: Graph) -> list[set[int]]:
    """Connected components of the live graph, ordered by smallest vertex."""
    masks = g.adjacency_masks()
    left = g.alive
    out = []
    while left:
        start = left & -left
        comp = start
        frontier = start
        while frontier:
            nxt = 0
            for v in iter_bits(frontier):
                nxt |= masks[v]
            frontier = nxt & ~comp
            comp |= frontier
        left &= ~comp
        out.append(set(iter_bits(comp)))
    return out


def is_bipartite(g: Graph) -> bool:
    masks = g.adjacency_masks()
    colour: dict[int, int] = {}
    for s in iter_bits(g.alive):
        if s in colour:
            continue
        colour[s] = 0
        stack = [s]
        while stack:
            v = stack.pop()
            for w in iter_bits(masks[v]):
                if w not in colour:
                    colour[w] = 1 - colour[v]
                    stack.append(w)
                elif colour[w] == colour[v]:
                    return False
    return True


def induced_subgraph(g: Graph, keep: Iterable[int]) -> Graph:
    """G[keep] as a masked view (IDs preserved)."""
    return g.with_masks(_vertex_mask(g, keep), g.dead_edges)


def degree_sequence(g: Graph) -> list[int]:
    masks = g.adjacency_masks()
    return sorted(masks[v].bit_count() for v in iter_bits(g.alive))
