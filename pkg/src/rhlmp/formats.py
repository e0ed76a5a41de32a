"""Graph files: JSON with construction metadata, plain edge lists and DOT.

JSON graph schema::

    {"format": "rhlmp-graph", "version": 1, "n": 8, "edges": [[0, 1], ...],
     "metadata": {"family": "g84" | "rhl" | "hypercube" | "custom",
                  "dimension": 3,
                  "edge_kinds": ["boundary", "diagonal", "cross4", ...],
                  "composition": {"bijections": [[...], ...],
                                  "parts": [[...], [...]],
                                  "cross_edges": [[u, v], ...]}}}

``edge_kinds`` is aligned with ``edges``; ``composition`` describes the top
composition (parts, cross edges) and lists every bijection of the tree in
build order.  Edge lists are ``n m`` followed by m lines ``u v``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

from .constructors import (Bijection, ComposedGraph, build_rhl, leaf_edge_kinds,
                           recursive_circulant_g84)
from .graph import Graph, GraphError, new_graph, norm_edge

FORMAT_TAG = "rhlmp-graph"


@dataclass
class GraphFile:
    n: int
    edges: list[tuple[int, int]]
    metadata: dict = field(default_factory=dict)

    def graph(self) -> Graph:
        return new_graph(self.n, self.edges)

    def validate(self) -> None:
        g = self.graph()
        meta = self.metadata
        kinds = meta.get("edge_kinds")
        if kinds is not None and len(kinds) != len(self.edges):
            raise GraphError("edge_kinds must align with edges")
        comp = meta.get("composition")
        if comp:
            p0, p1 = (set(p) for p in comp["parts"])
            if p0 & p1 or p0 | p1 != set(range(self.n)) or len(p0) != len(p1):
                raise GraphError("composition parts must split the vertex set in half")
            seen0, seen1 = set(), set()
            for u, v in comp["cross_edges"]:
                if not g.has_edge(u, v):
                    raise GraphError(f"cross edge ({u}, {v}) is not an edge")
                a, b = (u, v) if u in p0 else (v, u)
                if a not in p0 or b not in p1 or a in seen0 or b in seen1:
                    raise GraphError("cross edges do not form a part-to-part perfect matching")
                seen0.add(a)
                seen1.add(b)
            if seen0 != p0:
                raise GraphError("cross edges do not cover both parts")
        family = meta.get("family")
        if family == "g84" and g != recursive_circulant_g84():
            raise GraphError("edges do not match G(8,4)")
        if family == "rhl" and comp:
            rebuilt = build_rhl(meta["dimension"], [Bijection(tuple(p)) for p in comp["bijections"]])
            rebuilt = rebuilt.graph if isinstance(rebuilt, ComposedGraph) else rebuilt
            if rebuilt != g:
                raise GraphError("edges do not match the recorded composition tree")

    def to_json(self) -> dict:
        return {"format": FORMAT_TAG, "version": 1, "n": self.n,
                "edges": [list(e) for e in self.edges], "metadata": self.metadata}

    @classmethod
    def from_json(cls, data: dict) -> "GraphFile":
        if not isinstance(data, dict) or "n" not in data or "edges" not in data:
            raise GraphError("not a graph file: need 'n' and 'edges'")
        edges = [tuple(int(x) for x in e) for e in data["edges"]]
        if any(len(e) != 2 for e in edges):
            raise GraphError("edges must be pairs")
        gf = cls(int(data["n"]), edges, dict(data.get("metadata") or {}))
        gf.validate()
        return gf


def graph_file(obj: Union[Graph, ComposedGraph], family: str = "custom") -> GraphFile:
    """Describe a constructed graph, with kinds and composition when known."""
    g = obj.graph if isinstance(obj, ComposedGraph) else obj
    edges = g.live_edges()
    meta: dict = {"family": family}
    if family in ("g84", "rhl", "hypercube"):
        meta["dimension"] = g.n.bit_length() - 1
    if family in ("g84", "rhl"):
        tags = leaf_edge_kinds(obj)
        meta["edge_kinds"] = [tags[e] for e in edges]
    if isinstance(obj, ComposedGraph):
        meta["composition"] = {
            "bijections": [p.to_list() for p in obj.tree_bijections()],
            "parts": [sorted(obj.part0), sorted(obj.part1)],
            "cross_edges": [list(norm_edge(*e)) for e in obj.cross_edges],
        }
    return GraphFile(g.n, edges, meta)


def write_graph(path: Union[str, Path], gf: GraphFile) -> None:
    Path(path).write_text(json.dumps(gf.to_json(), indent=1) + "\n")


def read_graph(path: Union[str, Path]) -> GraphFile:
    """Load a JSON graph file, or an edge list when the text is not JSON."""
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        g = parse_edgelist(text)
        return GraphFile(g.n, g.live_edges())
    return GraphFile.from_json(data)


def format_edgelist(g: Graph) -> str:
    edges = g.live_edges()
    lines = [f"{g.n} {len(edges)}"] + [f"{u} {v}" for u, v in edges]
    return "\n".join(lines) + "\n"


def parse_edgelist(text: str) -> Graph:
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not rows or len(rows[0]) != 2:
        raise GraphError("edge list must start with 'n m'")
    try:
        n, m = int(rows[0][0]), int(rows[0][1])
        edges = [(int(a), int(b)) for a, b in rows[1:]]
    except ValueError as exc:
        raise GraphError(f"bad edge list: {exc}") from None
    if len(edges) != m:
        raise GraphError(f"header announces {m} edges, found {len(edges)}")
    return new_graph(n, edges)


_DOT_STYLE = {
    "boundary": 'color="black"',
    "diagonal": 'color="gray40", style="dashed"',
}


def format_dot(gf: GraphFile, name: str = "G") -> str:
    kinds = gf.metadata.get("edge_kinds") or [None] * len(gf.edges)
    top = None
    if gf.metadata.get("dimension"):
        top = f"cross{gf.metadata['dimension']}"
    lines = [f"graph {name} {{", "  node [shape=circle];"]
    lines += [f"  {v};" for v in range(gf.n)]
    for (u, v), kind in zip(gf.edges, kinds):
        attrs = []
        if kind in _DOT_STYLE:
            attrs.append(_DOT_STYLE[kind])
        elif kind and kind.startswith("cross"):
            attrs.append('color="red", penwidth=2' if kind == top else 'color="blue"')
        if kind:
            attrs.append(f'class="{kind}"')
        suffix = f" [{', '.join(attrs)}]" if attrs else ""
        lines.append(f"  {u} -- {v}{suffix};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def parse_phi(text: str, size: int = 8) -> Bijection:
    """``identity``, ``seed:<int>`` or ``file:<path>`` (JSON permutation)."""
    if text == "identity":
        return Bijection.identity(size)
    if text.startswith("seed:"):
        return Bijection.random(size, int(text[5:]))
    if text.startswith("file:"):
        data = json.loads(Path(text[5:]).read_text())
        if data and isinstance(data[0], list):
            if len(data) != 1:
                raise GraphError("expected a single permutation")
            data = data[0]
        return Bijection(tuple(data))
    raise GraphError(f"unknown phi {text!r}")
