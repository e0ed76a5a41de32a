"""Independent brute-force oracles and seeded random graphs for cross-checks."""

from __future__ import annotations

import random
from functools import lru_cache

from .graph import Graph, iter_bits, new_graph


def random_graph(seed: int, max_n: int, min_n: int = 1) -> Graph:
    """Erdos-Renyi graph with n and the edge density drawn from ``seed``."""
    rng = random.Random(seed)
    n = rng.randint(min_n, max_n)
    p = rng.uniform(0.1, 0.7)
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return new_graph(n, edges)


def brute_force_matching_number(g: Graph) -> int:
    """Maximum matching size by exhaustive recursion over the lowest vertex."""
    adj = g.adjacency_masks()

    @lru_cache(maxsize=None)
    def best(mask: int) -> int:
        if not mask:
            return 0
        v = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << v)
        out = best(rest)
        for w in iter_bits(adj[v] & rest):
            out = max(out, 1 + best(rest & ~(1 << w)))
        return out

    return best(g.alive)
