"""Exhaustive Hamiltonian cycle / path search and fault-Hamiltonicity checks.

The search extends a path one vertex at a time over bitmask adjacency.
Branches are cut only when they provably contain no witness:

* an unvisited vertex with fewer than two possible cycle neighbors
  (unvisited vertices plus the two path ends) cannot be covered;
* two unvisited vertices whose only remaining options force them to follow
  the current end cannot both be next;
* the unvisited vertices together with the current end must be connected.

Candidates are tried fewest-onward-moves first.

Before the exhaustive search, a seeded rotation-extension walk (extend the
path from its end; when stuck, rotate the path at a neighbor of the end)
looks for a witness.  It is only a fast way to find witnesses: a "none"
answer always comes from the exhaustive search.  A Hamiltonian u-v path is
searched as a Hamiltonian cycle through an extra vertex joined to u and v.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .graph import Graph, GraphError, delete_faults, iter_bits
from .matching import fpm_from_hamiltonian_cycle


class SearchTimeout(Exception):
    pass


@dataclass(frozen=True)
class HamWitness:
    kind: str  # "cycle" or "path"
    sequence: tuple[int, ...]

    @property
    def endpoints(self) -> Optional[tuple[int, int]]:
        if self.kind == "path":
            return self.sequence[0], self.sequence[-1]
        return None

    def check(self, g: Graph) -> None:
        seq = list(self.sequence)
        if sorted(seq) != g.vertices():
            raise GraphError("witness does not cover every alive vertex exactly once")
        pairs = list(zip(seq, seq[1:]))
        if self.kind == "cycle":
            pairs.append((seq[-1], seq[0]))
        for a, b in pairs:
            if not g.has_edge(a, b):
                raise GraphError(f"witness uses missing edge ({a}, {b})")

    def to_json(self) -> dict:
        return {"kind": self.kind, "sequence": list(self.sequence)}


def _connected(adj: Sequence[int], mask: int) -> bool:
    if not mask:
        return True
    seen = mask & -mask
    frontier = seen
    while frontier:
        nxt = 0
        for v in iter_bits(frontier):
            nxt |= adj[v]
        frontier = nxt & mask & ~seen
        seen |= frontier
    return seen == mask


class _Search:
    def __init__(self, adj, deadline):
        self.adj = adj
        self.deadline = deadline
        self.nodes = 0

    def tick(self):
        self.nodes += 1
        if self.deadline is not None and self.nodes & 1023 == 0 and time.perf_counter() > self.deadline:
            raise SearchTimeout

    def run(self, path: list[int], left: int, target: int, closing: bool) -> bool:
        """Extend ``path`` through every vertex of ``left``.

        For cycles ``target`` is the start vertex (the last vertex must be
        adjacent to it); for paths it is the required final vertex, which is
        excluded from ``left``.
        """
        self.tick()
        adj = self.adj
        cur = path[-1]
        if not left:
            if closing:
                return bool(adj[cur] >> target & 1)
            if adj[cur] >> target & 1:
                path.append(target)
                return True
            return False
        ends = (1 << cur) | (1 << target)
        pool = left | ends
        # at the cycle start cur == target and has two free slots
        single_slot = not (closing and cur == target)
        forced = 0
        for w in iter_bits(left):
            avail = adj[w] & pool
            cnt = avail.bit_count()
            if cnt < 2:
                return False
            if cnt == 2 and single_slot and avail >> cur & 1:
                # w must sit next to cur, hence directly after it
                if closing or not avail >> target & 1:
                    forced |= 1 << w
        if not closing and (adj[target] & (left | (1 << cur))) == 0:
            return False
        if forced.bit_count() > 1:
            return False
        if not _connected(adj, left | (1 << cur)):
            return False
        cand = adj[cur] & left
        if forced:
            cand &= forced
        order = sorted(iter_bits(cand), key=lambda w: ((adj[w] & left).bit_count(), w))
        for w in order:
            path.append(w)
            if self.run(path, left & ~(1 << w), target, closing):
                return True
            path.pop()
        return False


def _prep(g: Graph):
    return g.adjacency_masks(), g.alive


def rotation_cycle(adj: Sequence[int], alive: int, seed: int = 0,
                   max_steps: Optional[int] = None) -> Optional[list[int]]:
    """Rotation-extension search for a Hamiltonian cycle; None if it gives up."""
    n_alive = alive.bit_count()
    if n_alive < 3:
        return None
    rng = random.Random(seed)
    if max_steps is None:
        max_steps = 40 * n_alive * n_alive
    start = min(iter_bits(alive), key=lambda v: (adj[v].bit_count(), v))
    path = [start]
    left = alive & ~(1 << start)
    for _ in range(max_steps):
        end = path[-1]
        ext = adj[end] & left
        if ext:
            opts = list(iter_bits(ext))
            best = min((adj[w] & left).bit_count() for w in opts)
            w = rng.choice([w for w in opts if (adj[w] & left).bit_count() == best])
            path.append(w)
            left &= ~(1 << w)
            continue
        if not left and adj[end] >> path[0] & 1:
            return path
        if rng.random() < 0.05:
            path.reverse()
            continue
        pos = {v: i for i, v in enumerate(path)}
        pivots = [pos[w] for w in iter_bits(adj[end]) if w in pos and pos[w] < len(path) - 2]
        if not pivots:
            path.reverse()
            continue
        good = [i for i in pivots if adj[path[i + 1]] & left]
        i = rng.choice(good or pivots)
        path[i + 1:] = path[:i:-1]
    return None


def hamiltonian_cycle(g: Graph, time_limit: Optional[float] = None) -> Optional[HamWitness]:
    """A Hamiltonian cycle of the live graph, or None if there is none.

    Raises SearchTimeout when ``time_limit`` seconds pass without a verdict.
    """
    adj, alive = _prep(g)
    if alive.bit_count() < 3:
        raise GraphError("a Hamiltonian cycle needs at least 3 alive vertices")
    if any(adj[v].bit_count() < 2 for v in iter_bits(alive)):
        return None
    if not _connected(adj, alive):
        return None
    quick = rotation_cycle(adj, alive)
    if quick is not None:
        w = HamWitness("cycle", tuple(quick))
        w.check(g)
        return w
    start = min(iter_bits(alive), key=lambda v: (adj[v].bit_count(), v))
    deadline = None if time_limit is None else time.perf_counter() + time_limit
    s = _Search(adj, deadline)
    path = [start]
    if s.run(path, alive & ~(1 << start), start, closing=True):
        w = HamWitness("cycle", tuple(path))
        w.check(g)
        return w
    return None


def hamiltonian_path(g: Graph, u: int, v: int,
                     time_limit: Optional[float] = None) -> Optional[HamWitness]:
    """A Hamiltonian u-v path of the live graph, or None."""
    if u == v or not g.is_alive(u) or not g.is_alive(v):
        raise GraphError(f"invalid endpoints ({u}, {v})")
    adj, alive = _prep(g)
    if alive.bit_count() == 2:
        return HamWitness("path", (u, v)) if adj[u] >> v & 1 else None
    x = g.n
    ext = list(adj) + [(1 << u) | (1 << v)]
    ext[u] |= 1 << x
    ext[v] |= 1 << x
    quick = rotation_cycle(ext, alive | (1 << x))
    if quick is not None:
        i = quick.index(x)
        seq = quick[i + 1:] + quick[:i]
        if seq[0] != u:
            seq.reverse()
        w = HamWitness("path", tuple(seq))
        w.check(g)
        return w
    deadline = None if time_limit is None else time.perf_counter() + time_limit
    s = _Search(adj, deadline)
    path = [u]
    if s.run(path, alive & ~(1 << u) & ~(1 << v), v, closing=False):
        w = HamWitness("path", tuple(path))
        w.check(g)
        return w
    return None


def is_hamiltonian_connected(g: Graph) -> tuple[bool, list[tuple[int, int]]]:
    """Check every pair of alive vertices; returns (ok, failing pairs)."""
    verts = g.vertices()
    bad = []
    for i, a in enumerate(verts):
        for b in verts[i + 1:]:
            if hamiltonian_path(g, a, b) is None:
                bad.append((a, b))
    return not bad, bad


@dataclass
class FaultHamReport:
    budget: int
    mode: str
    connected: bool
    cases: int = 0
    pairs_checked: int = 0
    failures: list = field(default_factory=list)
    timeouts: list = field(default_factory=list)
    max_search_ms: float = 0.0
    total_ms: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures and not self.timeouts

    def to_json(self, timing: bool = True) -> dict:
        out = {"budget": self.budget, "mode": self.mode, "connected": self.connected,
               "cases": self.cases, "pairs_checked": self.pairs_checked,
               "failures": self.failures, "timeouts": self.timeouts}
        if timing:
            out["max_search_ms"] = round(self.max_search_ms, 3)
            out["total_ms"] = round(self.total_ms, 3)
        return out


def verify_fault_hamiltonian(g: Graph, f_budget: int,
                             mode: Union[str, tuple] = "exhaustive",
                             connected: bool = False,
                             time_limit: Optional[float] = None) -> FaultHamReport:
    """Check Hamiltonicity of G - F over fault sets of vertices and edges.

    ``mode="exhaustive"`` covers every fault set of size 1..f_budget;
    ``mode=("sample", N, seed)`` draws N uniform fault sets of size exactly
    f_budget.  With ``connected`` the check is for a Hamiltonian path
    between every pair of alive vertices instead of a cycle.
    """
    from .preclusion import PreclusionKind, iter_fault_sets, sample_fault_sets

    t0 = time.perf_counter()
    if mode == "exhaustive":
        label = "exhaustive"
        sets = (f for k in range(1, f_budget + 1)
                for f in iter_fault_sets(g, PreclusionKind.FSMP, k))
    else:
        _, count, seed = mode
        label = f"sample({count},{seed})"
        sets = iter(sample_fault_sets(g, PreclusionKind.FSMP, f_budget, count, seed))
    rep = FaultHamReport(f_budget, label, connected)
    for f in sets:
        rep.cases += 1
        h = delete_faults(g, f)
        t = time.perf_counter()
        try:
            if connected:
                ok, bad = is_hamiltonian_connected(h)
                n = h.order
                rep.pairs_checked += n * (n - 1) // 2
            else:
                ok = h.order >= 3 and hamiltonian_cycle(h, time_limit) is not None
        except SearchTimeout:
            rep.timeouts.append(f.to_dict())
        else:
            if not ok:
                rep.failures.append(f.to_dict())
        rep.max_search_ms = max(rep.max_search_ms, (time.perf_counter() - t) * 1000.0)
    rep.total_ms = (time.perf_counter() - t0) * 1000.0
    return rep


def fpm_via_hamiltonian_cycle(g: Graph):
    """Fractional perfect matching of weight 1/2 along a Hamiltonian cycle,
    or None when G has no Hamiltonian cycle."""
    w = hamiltonian_cycle(g)
    return None if w is None else fpm_from_hamiltonian_cycle(g, w.sequence)
