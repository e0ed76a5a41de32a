"""Exact mp / smp / fmp / fsmp by ordered exhaustive search over fault sets.

The fault universe of a kind lists the alive vertices (strong kinds only,
ascending) followed by the live edges in dense-index order.  Size-k fault
sets are visited as k-subsets of universe positions in lexicographic order;
that order fixes the witness lists, block boundaries and counters so that
every result is independent of the number of workers.

Survival checks share work through two devices:

* a per-vertex-part state: the live adjacency and a matching of
  G - F_V, derived from the parent state by deleting one vertex and
  re-augmenting only the vertices that lost their partner;
* a small cache of certificates for that state, each stored as the bitmask
  of edges it uses.  A candidate F = F_V + F_E survives as soon as one
  cached certificate avoids every edge of F_E; otherwise the first cached
  solution is repaired after dropping the F_E edges.

For fractional kinds the certificate is a perfect matching of the double
cover, for integral kinds a perfect / almost-perfect matching.  Deleting
edges never creates a matching, so a dead vertex part precludes every
completion.
"""

from __future__ import annotations

import enum
import itertools
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb
from typing import Iterator, Optional, Sequence, Union

from .graph import FaultError, FaultSet, Graph, delete_faults, iter_bits
from .matching import (CertificateError, cover_solve, edmonds_augment, has_almost_perfect_matching,
                       has_fractional_perfect_matching, has_perfect_matching,
                       odd_components_witness)


class PreclusionKind(enum.Enum):
    MP = "mp"
    SMP = "smp"
    FMP = "fmp"
    FSMP = "fsmp"

    @property
    def vertex_faults(self) -> bool:
        return self in (PreclusionKind.SMP, PreclusionKind.FSMP)

    @property
    def fractional(self) -> bool:
        return self in (PreclusionKind.FMP, PreclusionKind.FSMP)

    @classmethod
    def parse(cls, value: Union[str, "PreclusionKind"]) -> "PreclusionKind":
        if isinstance(value, PreclusionKind):
            return value
        return cls(value.lower())


# ---------------------------------------------------------------------------
# universe and plain enumeration


@dataclass(frozen=True)
class Universe:
    vertices: tuple[int, ...]
    edge_ids: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]

    def __len__(self):
        return len(self.vertices) + len(self.edge_ids)

    def fault_set(self, positions: Sequence[int]) -> FaultSet:
        nv = len(self.vertices)
        return FaultSet.of(
            (self.vertices[p] for p in positions if p < nv),
            (self.edges[p - nv] for p in positions if p >= nv))

    def positions(self, f: FaultSet) -> tuple[int, ...]:
        nv = len(self.vertices)
        vpos = {v: i for i, v in enumerate(self.vertices)}
        epos = {e: nv + i for i, e in enumerate(self.edges)}
        try:
            out = [vpos[v] for v in f.vertices] + [epos[e] for e in f.edges]
        except KeyError as exc:
            raise FaultError(f"{exc.args[0]} is outside the fault universe") from None
        return tuple(sorted(out))


def universe(g: Graph, kind: Union[str, PreclusionKind]) -> Universe:
    kind = PreclusionKind.parse(kind)
    ids = tuple(g.live_edge_ids())
    verts = tuple(g.vertices()) if kind.vertex_faults else ()
    return Universe(verts, ids, tuple(g.edges[i] for i in ids))


def iter_fault_sets(g: Graph, kind: Union[str, PreclusionKind], size: int) -> Iterator[FaultSet]:
    """All fault sets of one size, in the deterministic lexicographic order."""
    uni = universe(g, kind)
    for combo in itertools.combinations(range(len(uni)), size):
        yield uni.fault_set(combo)


def sample_fault_sets(g: Graph, kind: Union[str, PreclusionKind], size: int, count: int,
                      seed: int) -> list[FaultSet]:
    """``count`` uniform size-``size`` fault sets drawn with random.Random(seed)."""
    uni = universe(g, kind)
    rng = random.Random(seed)
    pool = range(len(uni))
    return [uni.fault_set(sorted(rng.sample(pool, size))) for _ in range(count)]


# ---------------------------------------------------------------------------
# survival predicate


def _check_universe(g: Graph, f: FaultSet, kind: PreclusionKind) -> None:
    if f.vertices and not kind.vertex_faults:
        raise FaultError(f"{kind.value} fault sets contain edges only")


def survives(g: Graph, f: FaultSet, kind: Union[str, PreclusionKind]) -> bool:
    """Whether G - F still has the object the kind tries to destroy.

    Integral kinds: a perfect matching (even order) or an almost-perfect
    matching (odd order).  Fractional kinds: a fractional perfect matching.
    """
    kind = PreclusionKind.parse(kind)
    _check_universe(g, f, kind)
    h = delete_faults(g, f)
    if kind.fractional:
        return has_fractional_perfect_matching(h)[0]
    if h.order % 2:
        return has_almost_perfect_matching(h)
    return has_perfect_matching(h)


def certificate(g: Graph, f: FaultSet, kind: Union[str, PreclusionKind]):
    """Non-survival certificate for a precluding F (on G - F)."""
    kind = PreclusionKind.parse(kind)
    h = delete_faults(g, f)
    if kind.fractional:
        ok, cert = has_fractional_perfect_matching(h)
        if ok:
            raise CertificateError("fault set does not preclude")
        return cert
    return odd_components_witness(h)


def is_trivial_solution(g: Graph, f: FaultSet) -> bool:
    """True iff F is exactly the set of live edges at one vertex."""
    if f.vertices:
        raise FaultError("trivial solutions consist of edges only")
    if not f.edges:
        return False
    candidates = set.intersection(*(set(e) for e in f.edges))
    for v in candidates:
        star = {(min(v, w), max(v, w)) for w in g.neighbors(v)}
        if star == set(f.edges):
            return True
    return False


# ---------------------------------------------------------------------------
# sweep kernel

_CERT_CAP = 24


class _State:
    __slots__ = ("alive", "adj", "sols", "masks", "dead")

    def __init__(self, alive, adj, sols, masks, dead=False):
        self.alive = alive
        self.adj = adj
        self.sols = sols
        self.masks = masks
        self.dead = dead


class SweepKernel:
    """Survival checks for one graph and kind over universe positions."""

    def __init__(self, g: Graph, kind: Union[str, PreclusionKind]):
        self.kind = PreclusionKind.parse(kind)
        self.graph = g
        self.uni = universe(g, self.kind)
        self.nv = len(self.uni.vertices)
        self.size = len(self.uni)
        es = self.uni.edges
        base = self.graph.adjacency_masks()
        self.base_adj = base
        self.edge_bit = {e: 1 << i for i, e in enumerate(es)}
        # per universe position: bit in edge masks (0 for vertex positions)
        self.pos_bit = [0] * self.nv + [1 << i for i in range(len(es))]
        self.pos_edge = [None] * self.nv + list(es)
        self.fractional = self.kind.fractional
        self.n = g.n
        self._root = None

    # -- certificates -----------------------------------------------------

    def _mask_of(self, sol) -> int:
        eb = self.edge_bit
        m = 0
        if self.fractional:
            mate_l = sol[0]
            for u, v in enumerate(mate_l):
                if v >= 0:
                    m |= eb[(u, v) if u < v else (v, u)]
        else:
            for u, v in enumerate(sol):
                if v > u:
                    m |= eb[(u, v)]
        return m

    def _complete(self, adj, alive, sol) -> bool:
        """Finish a partial solution in place; True on success."""
        if self.fractional:
            return cover_solve(adj, alive, sol[0], sol[1]) < 0
        allowed = alive.bit_count() & 1
        failed = 0
        for v in iter_bits(alive):
            if sol[v] == -1 and not edmonds_augment(v, adj, sol):
                failed += 1
                if failed > allowed:
                    return False
        return True

    def root(self) -> _State:
        if self._root is None:
            g = self.graph
            adj = list(self.base_adj)
            if self.fractional:
                sol = ([-1] * self.n, [-1] * self.n)
            else:
                sol = [-1] * self.n
            ok = self._complete(adj, g.alive, sol)
            if ok:
                self._root = _State(g.alive, adj, [sol], [self._mask_of(sol)])
            else:
                self._root = _State(g.alive, adj, [], [], dead=True)
        return self._root

    def child(self, st: _State, w: int) -> _State:
        """State for one more deleted vertex ``w``.

        A dead parent is solved again from scratch: deleting a vertex can
        restore a fractional perfect matching, and flips the parity target
        of the integral kinds.
        """
        alive = st.alive & ~(1 << w)
        bit = ~(1 << w)
        adj = [m & bit for m in st.adj]
        adj[w] = 0
        if st.dead:
            sol = ([-1] * self.n, [-1] * self.n) if self.fractional else [-1] * self.n
        elif self.fractional:
            mate_l, mate_r = st.sols[0]
            mate_l = mate_l[:]
            mate_r = mate_r[:]
            v = mate_l[w]
            if v >= 0:
                mate_l[w] = -1
                mate_r[v] = -1
            u = mate_r[w]
            if u >= 0:
                mate_r[w] = -1
                mate_l[u] = -1
            sol = (mate_l, mate_r)
        else:
            sol = st.sols[0][:]
            v = sol[w]
            if v >= 0:
                sol[w] = -1
                sol[v] = -1
        if self._complete(adj, alive, sol):
            return _State(alive, adj, [sol], [self._mask_of(sol)])
        return _State(alive, adj, [], [], dead=True)

    def repair(self, st: _State, edges: Sequence[tuple[int, int]]) -> bool:
        """Slow path: survival of the state's graph minus ``edges``."""
        adj = list(st.adj)
        for a, b in edges:
            adj[a] &= ~(1 << b)
            adj[b] &= ~(1 << a)
        if self.fractional:
            mate_l, mate_r = st.sols[0]
            mate_l = mate_l[:]
            mate_r = mate_r[:]
            for a, b in edges:
                if mate_l[a] == b:
                    mate_l[a] = -1
                    mate_r[b] = -1
                if mate_l[b] == a:
                    mate_l[b] = -1
                    mate_r[a] = -1
            sol = (mate_l, mate_r)
        else:
            sol = st.sols[0][:]
            for a, b in edges:
                if sol[a] == b:
                    sol[a] = -1
                    sol[b] = -1
        if not self._complete(adj, st.alive, sol):
            return False
        if len(st.masks) >= _CERT_CAP:
            del st.masks[1]
            del st.sols[1]
        st.masks.append(self._mask_of(sol))
        st.sols.append(sol)
        return True

    def survives_positions(self, positions: Sequence[int]) -> bool:
        st = self.root()
        emask = 0
        edges = []
        for p in positions:
            if p < self.nv:
                st = self.child(st, self.uni.vertices[p])
            else:
                emask |= self.pos_bit[p]
                edges.append(self.pos_edge[p])
        if st.dead:
            return False
        for c in st.masks:
            if not c & emask:
                return True
        return self.repair(st, edges)

    # -- lexicographic block sweep ----------------------------------------

    def sweep_block(self, first: int, k: int, limit: Optional[int]) -> "BlockResult":
        """All k-subsets whose smallest position is ``first``, in lex order.

        Stops after ``limit`` precluding sets (None = never).
        """
        res = BlockResult(first)
        U = self.size
        nv = self.nv
        pos_bit = self.pos_bit
        pos_edge = self.pos_edge
        verts = self.uni.vertices
        hits = res.hits

        class _Stop(Exception):
            pass

        def record(prefix):
            hits.append(prefix)
            if limit is not None and len(hits) >= limit:
                raise _Stop

        def rec(start, remaining, st, prefix, emask, edges):
            if st.dead and start >= nv:
                # only edges remain, and deleting edges never restores the object
                for rest in itertools.combinations(range(start, U), remaining):
                    res.checked += 1
                    record(prefix + rest)
                return
            if remaining == 1:
                j = start
                while j < nv:
                    c = self.child(st, verts[j])
                    res.checked += 1
                    if c.dead:
                        record(prefix + (j,))
                    j += 1
                if st.dead:
                    for j in range(j, U):
                        res.checked += 1
                        record(prefix + (j,))
                    return
                masks = st.masks
                for j in range(j, U):
                    m = emask | pos_bit[j]
                    res.checked += 1
                    for c in masks:
                        if not c & m:
                            break
                    else:
                        if not self.repair(st, edges + [pos_edge[j]]):
                            record(prefix + (j,))
                return
            for j in range(start, U - remaining + 1):
                if j < nv:
                    rec(j + 1, remaining - 1, self.child(st, verts[j]), prefix + (j,), emask, edges)
                else:
                    rec(j + 1, remaining - 1, st, prefix + (j,), emask | pos_bit[j],
                        edges + [pos_edge[j]])

        root = self.root()
        try:
            if k == 1:
                res.checked += 1
                if not self.survives_positions((first,)):
                    record((first,))
            elif first < nv:
                rec(first + 1, k - 1, self.child(root, verts[first]), (first,), 0, [])
            else:
                rec(first + 1, k - 1, root, (first,), pos_bit[first], [pos_edge[first]])
        except _Stop:
            res.stopped = True
        return res


@dataclass
class BlockResult:
    first: int
    checked: int = 0
    hits: list = field(default_factory=list)
    stopped: bool = False


# worker-process globals (fork start method shares the parent's kernel)
_WORKER_KERNEL: Optional[SweepKernel] = None


def _init_worker(g: Graph, kind: str) -> None:
    global _WORKER_KERNEL
    _WORKER_KERNEL = SweepKernel(g, kind)


def _run_block(args):
    first, k, limit = args
    return _WORKER_KERNEL.sweep_block(first, k, limit)


def sweep_size(kernel: SweepKernel, k: int, limit: Optional[int] = None,
               workers: int = 1, pool=None) -> tuple[int, list[tuple[int, ...]]]:
    """Sweep all size-k subsets; returns (sets checked, precluding sets).

    With ``limit`` the sweep stops after the first ``limit`` precluding sets
    in lexicographic order; the checked count then runs up to and including
    the last reported set, which no worker split can change.
    """
    U = kernel.size
    if k > U:
        return 0, []
    firsts = list(range(0, U - k + 1))
    if pool is None or workers <= 1:
        results = (kernel.sweep_block(f, k, limit) for f in firsts)
    else:
        results = pool.map(_run_block, [(f, k, limit) for f in firsts], chunksize=1)
    checked = 0
    hits: list[tuple[int, ...]] = []
    for r in results:
        if limit is not None and r.hits:
            take = r.hits[:limit - len(hits)]
            hits.extend(take)
            if len(hits) >= limit:
                # position of the last taken hit inside the block
                checked += _checked_through(kernel, k, r.first, take[-1])
                break
            checked += r.checked
        else:
            hits.extend(r.hits)
            checked += r.checked
    return checked, hits


def _checked_through(kernel: SweepKernel, k: int, first: int, last: tuple[int, ...]) -> int:
    """1-based lex rank of ``last`` among the k-subsets starting with ``first``."""
    U = kernel.size
    rank = 0
    prev = first
    for i in range(1, k):
        for x in range(prev + 1, last[i]):
            rank += comb(U - x - 1, k - i - 1)
        prev = last[i]
    return rank + 1


# ---------------------------------------------------------------------------
# results


@dataclass
class SizeStats:
    size: int
    count: int
    survivors: int
    complete: bool = True

    def to_json(self) -> dict:
        return {"size": self.size, "count": self.count, "survivors": self.survivors,
                "complete": self.complete}


@dataclass
class PreclusionResult:
    kind: PreclusionKind
    number: Optional[int]
    exhaustive: bool
    optimal_sets: list[FaultSet]
    certificates: list
    trivial_flags: list[bool]
    swept_sizes: list[SizeStats]
    budget: int
    all_witnesses: bool
    wall_time_ms: float = 0.0

    @property
    def lower_bound(self) -> int:
        """Smallest size not ruled out by the sweep."""
        return self.number if self.number is not None else self.budget + 1

    def to_json(self, timing: bool = True) -> dict:
        out = {
            "kind": self.kind.value,
            "number": self.number,
            "lower_bound": self.lower_bound,
            "exhaustive": self.exhaustive,
            "all_witnesses": self.all_witnesses,
            "budget": self.budget,
            "optimal_sets": [
                {**f.to_dict(), "certificate": c.to_json(), "trivial": t}
                for f, c, t in zip(self.optimal_sets, self.certificates, self.trivial_flags)
            ],
            "swept_sizes": [s.to_json() for s in self.swept_sizes],
        }
        if timing:
            out["wall_time_ms"] = round(self.wall_time_ms, 3)
        return out


def _pool(g: Graph, kind: PreclusionKind, workers: int):
    import multiprocessing as mp
    ctx = mp.get_context("fork") if "fork" in mp.get_all_start_methods() else None
    return ProcessPoolExecutor(max_workers=workers, mp_context=ctx,
                               initializer=_init_worker, initargs=(g, kind.value))


def preclusion_number(g: Graph, kind: Union[str, PreclusionKind], budget: int,
                      all_witnesses: bool = False, max_witnesses: Optional[int] = None,
                      workers: int = 1, start: int = 1) -> PreclusionResult:
    """Smallest k <= budget such that some size-k fault set precludes.

    Sizes ``start, start+1, ...`` are swept completely until one contains a
    precluding set.  At that size the sweep stops at the first witness
    unless ``all_witnesses`` (every optimal set) or ``max_witnesses`` is
    given.  ``number`` is None when nothing up to ``budget`` precludes.
    ``start`` > 1 skips sizes the caller has already ruled out and marks
    the result non-exhaustive.
    """
    kind = PreclusionKind.parse(kind)
    if budget < 1:
        raise ValueError("budget must be >= 1")
    t0 = time.perf_counter()
    kernel = SweepKernel(g, kind)
    limit = None if all_witnesses else (max_witnesses or 1)
    stats: list[SizeStats] = []
    hits: list[tuple[int, ...]] = []
    number = None
    if kernel.root().dead:
        number, hits = 0, [()]
    pool = _pool(g, kind, workers) if workers > 1 else None
    try:
        k = start
        while number is None and k <= budget:
            checked, found = sweep_size(kernel, k, limit, workers, pool)
            total = comb(kernel.size, k)
            if found:
                complete = checked == total
                stats.append(SizeStats(k, checked, checked - len(found), complete))
                number, hits = k, found
            else:
                stats.append(SizeStats(k, checked, checked))
            k += 1
    finally:
        if pool is not None:
            pool.shutdown(cancel_futures=True)
    sets = [kernel.uni.fault_set(h) for h in hits]
    certs = [certificate(g, f, kind) for f in sets]
    trivial = [not f.vertices and is_trivial_solution(g, f) for f in sets]
    return PreclusionResult(
        kind=kind, number=number, exhaustive=start <= 1, optimal_sets=sets,
        certificates=certs, trivial_flags=trivial, swept_sizes=stats, budget=budget,
        all_witnesses=all_witnesses,
        wall_time_ms=(time.perf_counter() - t0) * 1000.0)


# ---------------------------------------------------------------------------
# structure reports


def _is_g84(g: Graph) -> bool:
    from .constructors import recursive_circulant_g84
    return g.n == 8 and g.full() == recursive_circulant_g84() and g == g.full()


def optimal_set_structure(g: Graph, kind: Union[str, PreclusionKind],
                          result: PreclusionResult) -> dict:
    """Classify the optimal sets of ``result``.

    Every kind gets a (vertices, edges) composition histogram and a count
    of trivial sets.  FSMP on G(8,4) additionally checks each set against
    the shape "one vertex u plus one boundary edge e, u adjacent to an end
    of e" and whether any set uses a diagonal edge.
    """
    from .constructors import g84_edge_kind
    kind = PreclusionKind.parse(kind)
    hist: dict[str, int] = {}
    for f in result.optimal_sets:
        key = f"{len(f.vertices)}v+{len(f.edges)}e"
        hist[key] = hist.get(key, 0) + 1
    report = {
        "kind": kind.value,
        "number": result.number,
        "count": len(result.optimal_sets),
        "composition": dict(sorted(hist.items())),
        "trivial": sum(result.trivial_flags),
    }
    if kind is PreclusionKind.FSMP and _is_g84(g):
        shapes = []
        for f in result.optimal_sets:
            ok = False
            if len(f.vertices) == 1 and len(f.edges) == 1:
                (u,), ((a, b),) = tuple(f.vertices), tuple(f.edges)
                ok = (g84_edge_kind(a, b) == "boundary"
                      and (g.has_edge(u, a) or g.has_edge(u, b)))
            shapes.append(ok)
        report["shape_matches"] = shapes
        report["all_match"] = all(shapes) and bool(shapes)
        report["diagonal_used"] = any(
            g84_edge_kind(*e) == "diagonal" for f in result.optimal_sets for e in f.edges)
    return report
