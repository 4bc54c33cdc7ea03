"""Graph, path, and product-embedding primitives.

Vertices are dense integers 0..n-1.  Graphs are immutable after
construction and safe to share across threads.  A ProductEmbedding places
each graph vertex at a (host vertex, path coordinate) pair of a strong
product host ⊠ path, with path vertices identified with 0..d.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import EmbeddingError


class Graph:
    """Simple undirected graph with sorted adjacency lists."""

    __slots__ = ("n", "_edges", "_adj")

    def __init__(self, n: int, edges=()):
        if n < 0:
            raise ValueError("negative vertex count")
        self.n = n
        adj = [[] for _ in range(n)]
        edge_set = set()
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) outside vertex range")
            if u == v:
                raise ValueError(f"self-loop at {u}")
            e = (u, v) if u < v else (v, u)
            if e in edge_set:
                continue
            edge_set.add(e)
            adj[u].append(v)
            adj[v].append(u)
        self._edges = frozenset(edge_set)
        self._adj = tuple(tuple(sorted(a)) for a in adj)

    @property
    def m(self) -> int:
        return len(self._edges)

    @property
    def edges(self) -> frozenset:
        """Edges as (u, v) pairs with u < v."""
        return self._edges

    def neighbors(self, u: int) -> tuple:
        return self._adj[u]

    def degree(self, u: int) -> int:
        return len(self._adj[u])

    def has_edge(self, u: int, v: int) -> bool:
        if u > v:
            u, v = v, u
        return (u, v) in self._edges

    def subgraph(self, vertices) -> tuple["Graph", list]:
        """Induced subgraph on ``vertices`` plus the index map back to self.

        Returns (graph, old_ids) where old_ids[new] = old.
        """
        old_ids = sorted(vertices)
        new_id = {v: i for i, v in enumerate(old_ids)}
        edges = [
            (new_id[u], new_id[v])
            for u, v in self._edges
            if u in new_id and v in new_id
        ]
        return Graph(len(old_ids), edges), old_ids

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self._edges == other._edges

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


class ProductEmbedding:
    """Injective placement of graph vertices into host ⊠ path.

    ``placement[u] = (v, i)`` with v a host vertex and i in [0, path_len].
    Construction is permissive; use :func:`validate_embedding` to check
    injectivity and edge preservation.
    """

    __slots__ = ("host", "path_len", "placement", "_position")

    def __init__(self, host: Graph, path_len: int, placement):
        self.host = host
        self.path_len = path_len
        self.placement = tuple((int(v), int(i)) for v, i in placement)
        self._position = None

    @property
    def n(self) -> int:
        return len(self.placement)

    def position_of(self, v: int, i: int):
        """Graph vertex at host-vertex v, coordinate i, or None."""
        if self._position is None:
            pos = {}
            for u, vi in enumerate(self.placement):
                pos.setdefault(vi, u)
            self._position = pos
        return self._position.get((v, i))

    def place(self, u: int) -> tuple:
        if not 0 <= u < self.n:
            raise EmbeddingError(f"vertex {u} outside embedding")
        return self.placement[u]


def strong_product_adjacent(e: ProductEmbedding, a: int, b: int) -> bool:
    """Whether the images of a and b are adjacent in host ⊠ path.

    Distinct product vertices are adjacent iff the host components are
    equal or host-adjacent and the coordinates differ by at most one.
    """
    if a == b:
        raise ValueError("distinct vertices required")
    va, ia = e.place(a)
    vb, ib = e.place(b)
    if (va, ia) == (vb, ib):
        return False
    if abs(ia - ib) > 1:
        return False
    return va == vb or e.host.has_edge(va, vb)


@dataclass
class EmbeddingReport:
    ok: bool
    problems: list = field(default_factory=list)
    bad_edges: list = field(default_factory=list)


def validate_embedding(g: Graph, e: ProductEmbedding) -> EmbeddingReport:
    """Check injectivity, coordinate range, and edge preservation.

    Every edge of g must map to a strong-product edge of host ⊠ path.
    Failures are reported, not raised.
    """
    problems = []
    bad_edges = []
    if e.n != g.n:
        problems.append(f"embedding covers {e.n} vertices, graph has {g.n}")
        return EmbeddingReport(False, problems)
    seen = {}
    for u, (v, i) in enumerate(e.placement):
        if not 0 <= v < e.host.n:
            problems.append(f"vertex {u}: host vertex {v} out of range")
        if not 0 <= i <= e.path_len:
            problems.append(f"vertex {u}: coordinate {i} outside [0,{e.path_len}]")
        if (v, i) in seen:
            problems.append(f"vertices {seen[(v, i)]} and {u} share image ({v},{i})")
        seen[(v, i)] = u
    for u, v in sorted(g.edges):
        try:
            if not strong_product_adjacent(e, u, v):
                bad_edges.append((u, v))
        except (EmbeddingError, ValueError):
            bad_edges.append((u, v))
    for u, v in bad_edges:
        problems.append(f"edge ({u},{v}) not preserved by the embedding")
    return EmbeddingReport(not problems, problems, bad_edges)


@dataclass
class PruneResult:
    embedding: ProductEmbedding
    host_vertices: list  # old host id per new host id
    coord_shift: int  # amount subtracted from every coordinate


def prune_unused(e: ProductEmbedding) -> PruneResult:
    """Drop host vertices with empty used fibers and renumber coordinates
    to start at 0.  Idempotent; the shift is reported to the caller."""
    used_hosts = sorted({v for v, _ in e.placement})
    if e.placement:
        lo = min(i for _, i in e.placement)
        hi = max(i for _, i in e.placement)
    else:
        lo, hi = 0, 0
    host_map = {v: idx for idx, v in enumerate(used_hosts)}
    host_edges = [
        (host_map[u], host_map[v])
        for u, v in e.host.edges
        if u in host_map and v in host_map
    ]
    new_host = Graph(len(used_hosts), host_edges)
    placement = [(host_map[v], i - lo) for v, i in e.placement]
    return PruneResult(ProductEmbedding(new_host, hi - lo, placement), used_hosts, lo)


def materialize_product(host: Graph, path_len: int) -> Graph:
    """Explicit host ⊠ path graph; vertex (v, i) gets index v*(d+1)+i.

    Test oracle for the adjacency predicate; quadratic, keep inputs small.
    """
    width = path_len + 1
    edges = []
    for v in range(host.n):
        for i in range(path_len):
            edges.append((v * width + i, v * width + i + 1))
    for u, v in host.edges:
        for i in range(width):
            for j in (i - 1, i, i + 1):
                if 0 <= j < width:
                    edges.append((u * width + i, v * width + j))
    return Graph(host.n * width, edges)


# --- file formats -----------------------------------------------------------
#
# Graph (text):  first line "n m", then m lines "u v", 0-based.
# Graph (JSON):  {"n": ..., "edges": [[u, v], ...]}
# Embedding:     {"host": <graph JSON>, "d": ..., "map": [[v, i], ...]}
#                with map index = graph vertex.


def graph_to_json(g: Graph) -> dict:
    return {"n": g.n, "edges": [list(e) for e in sorted(g.edges)]}


def graph_from_json(obj: dict) -> Graph:
    return Graph(int(obj["n"]), [(int(u), int(v)) for u, v in obj["edges"]])


def load_graph(path: str) -> Graph:
    with open(path) as fh:
        text = fh.read()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return graph_from_json(json.loads(stripped))
    lines = [ln for ln in text.splitlines() if ln.strip()]
    n, m = map(int, lines[0].split())
    edges = [tuple(map(int, ln.split())) for ln in lines[1 : m + 1]]
    if len(edges) != m:
        raise ValueError(f"graph file declares {m} edges, found {len(edges)}")
    return Graph(n, edges)


def save_graph(g: Graph, path: str):
    with open(path, "w") as fh:
        fh.write(f"{g.n} {g.m}\n")
        for u, v in sorted(g.edges):
            fh.write(f"{u} {v}\n")


def embedding_to_json(e: ProductEmbedding) -> dict:
    return {
        "host": graph_to_json(e.host),
        "d": e.path_len,
        "map": [list(p) for p in e.placement],
    }


def embedding_from_json(obj: dict) -> ProductEmbedding:
    return ProductEmbedding(
        graph_from_json(obj["host"]),
        int(obj["d"]),
        [(int(v), int(i)) for v, i in obj["map"]],
    )


def load_embedding(path: str) -> ProductEmbedding:
    with open(path) as fh:
        return embedding_from_json(json.load(fh))


def save_embedding(e: ProductEmbedding, path: str):
    with open(path, "w") as fh:
        json.dump(embedding_to_json(e), fh)
