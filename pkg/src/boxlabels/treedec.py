"""Tree decompositions, chordal completion, and the bounded out-degree
orientation that seeds the labeling.

Decompositions are rooted (root at node 0, parent of root = -1).  The
primary pipeline accepts decompositions supplied with the instance;
``decompose`` provides a min-fill heuristic for arbitrary graphs and an
exact branch-and-bound decision procedure for small ones.  Label-width
bookkeeping always uses the achieved width, never a promised one.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import WidthExceededError
from .graphs import Graph


class TreeDecomposition:
    """Rooted tree of bags.  parent[0] == -1; bags are sorted tuples."""

    __slots__ = ("parent", "bags", "_children", "_depth")

    def __init__(self, parent, bags):
        if len(parent) != len(bags):
            raise ValueError("parent/bag length mismatch")
        if parent and parent[0] != -1:
            raise ValueError("root must be node 0 with parent -1")
        self.parent = tuple(parent)
        self.bags = tuple(tuple(sorted(set(b))) for b in bags)
        self._children = None
        self._depth = None

    @property
    def size(self) -> int:
        return len(self.bags)

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def children(self):
        if self._children is None:
            ch = [[] for _ in self.bags]
            for x, p in enumerate(self.parent):
                if p >= 0:
                    ch[p].append(x)
            self._children = tuple(tuple(c) for c in ch)
        return self._children

    def depths(self):
        if self._depth is None:
            d = [0] * len(self.bags)
            for x in range(1, len(self.bags)):
                d[x] = d[self.parent[x]] + 1  # parents precede children
            self._depth = tuple(d)
        return self._depth

    def restricted(self, keep) -> "TreeDecomposition":
        """Bags intersected with ``keep``; valid for the induced subgraph."""
        keep = set(keep)
        return TreeDecomposition(
            self.parent, [[v for v in b if v in keep] for b in self.bags]
        )

    def relabeled(self, mapping) -> "TreeDecomposition":
        return TreeDecomposition(
            self.parent, [[mapping[v] for v in b] for b in self.bags]
        )

    def to_json(self) -> dict:
        return {
            "nodes": self.size,
            "parent": list(self.parent),
            "bags": [list(b) for b in self.bags],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "TreeDecomposition":
        td = cls(
            [int(p) for p in obj["parent"]],
            [[int(v) for v in b] for b in obj["bags"]],
        )
        if td.size != int(obj["nodes"]):
            raise ValueError("node count mismatch in decomposition file")
        return td


def load_decomposition(path: str) -> TreeDecomposition:
    with open(path) as fh:
        return TreeDecomposition.from_json(json.load(fh))


def save_decomposition(td: TreeDecomposition, path: str):
    with open(path, "w") as fh:
        json.dump(td.to_json(), fh)


@dataclass
class DecompositionReport:
    ok: bool
    width: int
    problems: list = field(default_factory=list)


def validate_decomposition(g: Graph, td: TreeDecomposition) -> DecompositionReport:
    """Check the two decomposition axioms: every edge inside some bag,
    and every vertex's bag set induces a nonempty connected subtree."""
    problems = []
    nodes_of = [[] for _ in range(g.n)]
    for x, bag in enumerate(td.bags):
        for v in bag:
            if not 0 <= v < g.n:
                problems.append(f"bag {x} contains out-of-range vertex {v}")
            else:
                nodes_of[v].append(x)
    covered = set()
    for bag in td.bags:
        for i, u in enumerate(bag):
            for v in bag[i + 1 :]:
                covered.add((u, v))
    for u, v in sorted(g.edges):
        if (u, v) not in covered:
            problems.append(f"edge ({u},{v}) not covered by any bag")
    depth = td.depths() if td.size else ()
    for v in range(g.n):
        occ = nodes_of[v]
        if not occ:
            problems.append(f"vertex {v} appears in no bag")
            continue
        occ_set = set(occ)
        top = min(occ, key=lambda x: depth[x])
        for x in occ:
            if x != top and td.parent[x] not in occ_set:
                problems.append(f"vertex {v} has a disconnected bag subtree")
                break
    return DecompositionReport(not problems, td.width, problems)


def _decomposition_from_order(g: Graph, order) -> TreeDecomposition:
    """Standard clique-tree construction from an elimination order."""
    pos = {v: i for i, v in enumerate(order)}
    adj = [set(g.neighbors(v)) for v in range(g.n)]
    bags = []
    later = []  # index of the earliest-eliminated later neighbor, or -1
    for v in order:
        higher = sorted(adj[v], key=lambda u: pos[u])
        bags.append((v, *higher))
        later.append(pos[higher[0]] if higher else -1)
        for u in higher:
            adj[u].discard(v)
            adj[u].update(w for w in higher if w != u)
    if not bags:
        return TreeDecomposition([], [])
    # later[i] (an elimination position) is i's parent; roots chain together.
    parent = list(later)
    prev_root = None
    for i in range(len(bags) - 1, -1, -1):
        if parent[i] == -1:
            if prev_root is not None:
                parent[prev_root] = i
            prev_root = i
    return _rerooted(parent, bags, prev_root)


def _rerooted(parent, bags, root) -> TreeDecomposition:
    """Re-root so the root becomes node 0 and parents precede children."""
    n = len(bags)
    children = [[] for _ in range(n)]
    for x, p in enumerate(parent):
        if x != root:
            children[p].append(x)
    order = [root]
    new_parent = [-1]
    new_id = {root: 0}
    i = 0
    while i < len(order):
        x = order[i]
        i += 1
        for c in children[x]:
            new_id[c] = len(order)
            new_parent.append(new_id[x])
            order.append(c)
    return TreeDecomposition(new_parent, [bags[x] for x in order])


def _min_fill_order(g: Graph):
    adj = [set(g.neighbors(v)) for v in range(g.n)]
    alive = set(range(g.n))
    order = []
    while alive:
        best, best_fill = None, None
        for v in sorted(alive):
            nbrs = adj[v]
            fill = 0
            nl = sorted(nbrs)
            for i, a in enumerate(nl):
                for b in nl[i + 1 :]:
                    if b not in adj[a]:
                        fill += 1
            if best_fill is None or fill < best_fill:
                best, best_fill = v, fill
                if fill == 0:
                    break
        nl = sorted(adj[best])
        for i, a in enumerate(nl):
            for b in nl[i + 1 :]:
                adj[a].add(b)
                adj[b].add(a)
        for u in nl:
            adj[u].discard(best)
        alive.discard(best)
        order.append(best)
    return order


def _exact_order(g: Graph, width: int):
    """Elimination order witnessing treewidth <= width, or None.

    Branch and bound over elimination prefixes with memoization on the
    eliminated set; intended for n <= 32.
    """
    n = g.n
    base = [set(g.neighbors(v)) for v in range(n)]
    seen = set()

    def search(adj, remaining, order):
        if not remaining:
            return order
        key = frozenset(remaining)
        if key in seen:
            return None
        # eliminate simplicial vertices of small degree first (always safe)
        for v in sorted(remaining):
            nbrs = adj[v]
            if len(nbrs) <= width:
                nl = sorted(nbrs)
                if all(b in adj[a] for i, a in enumerate(nl) for b in nl[i + 1 :]):
                    res = search(
                        _eliminate(adj, v), remaining - {v}, order + [v]
                    )
                    if res is not None:
                        return res
                    seen.add(key)
                    return None
        for v in sorted(remaining):
            if len(adj[v]) <= width:
                res = search(_eliminate(adj, v), remaining - {v}, order + [v])
                if res is not None:
                    return res
        seen.add(key)
        return None

    def _eliminate(adj, v):
        new = [set(a) for a in adj]
        nl = sorted(new[v])
        for i, a in enumerate(nl):
            for b in nl[i + 1 :]:
                new[a].add(b)
                new[b].add(a)
        for u in nl:
            new[u].discard(v)
        new[v] = set()
        return new

    return search(base, frozenset(range(n)), [])


def decompose(g: Graph, width_hint: int | None = None) -> TreeDecomposition:
    """Tree decomposition of g.

    With a width hint and n <= 32, an exact search either meets the hint
    or raises WidthExceededError.  Otherwise the min-fill heuristic runs
    and the achieved width is whatever it is.
    """
    if g.n == 0:
        return TreeDecomposition([], [])
    if width_hint is not None and g.n <= 32:
        order = _exact_order(g, width_hint)
        if order is None:
            raise WidthExceededError(
                f"treewidth of the graph exceeds the hint {width_hint}"
            )
        return _decomposition_from_order(g, order)
    return _decomposition_from_order(g, _min_fill_order(g))


class ChordalOrientation:
    """Acyclic orientation of the bags-as-cliques supergraph.

    Vertex u is eliminated at the topmost bag containing it, in post-order
    of that bag (ties by vertex index).  Its out-neighborhood is then the
    set of later-eliminated vertices of that bag; together with u it forms
    a clique of the supergraph, so the out-degree is at most the width.
    Each arc carries a flag telling whether the edge exists in the input
    graph or only in the completion.
    """

    __slots__ = ("out", "order", "bound")

    def __init__(self, out, order, bound):
        self.out = out  # per vertex: tuple of (neighbor, in_graph flag)
        self.order = order  # elimination order
        self.bound = bound

    def clique_of(self, u: int):
        return (u,) + tuple(v for v, _ in self.out[u])


def chordal_orientation(g: Graph, td: TreeDecomposition) -> ChordalOrientation:
    depth = td.depths()
    top = [-1] * g.n
    for x, bag in enumerate(td.bags):
        for v in bag:
            if top[v] == -1 or depth[x] < depth[top[v]]:
                top[v] = x
    children = td.children()
    post = [0] * td.size
    stack = [(0, False)] if td.size else []
    counter = 0
    while stack:
        x, done = stack.pop()
        if done:
            post[x] = counter
            counter += 1
        else:
            stack.append((x, True))
            for c in reversed(children[x]):
                stack.append((c, False))
    key = [(post[top[v]], v) for v in range(g.n)]
    out = []
    for u in range(g.n):
        later = sorted(
            (v for v in td.bags[top[u]] if key[v] > key[u]),
            key=lambda v: key[v],
        )
        out.append(tuple((v, g.has_edge(u, v)) for v in later))
    order = sorted(range(g.n), key=lambda v: key[v])
    return ChordalOrientation(tuple(out), tuple(order), td.width)


def completion_graph(g: Graph, td: TreeDecomposition) -> Graph:
    """The chordal supergraph obtained by turning every bag into a clique."""
    edges = set(g.edges)
    for bag in td.bags:
        for i, u in enumerate(bag):
            for v in bag[i + 1 :]:
                edges.add((u, v))
    return Graph(g.n, edges)


def product_with_edge_decomposition(td: TreeDecomposition) -> TreeDecomposition:
    """Decomposition of host ⊠ K2 from a host decomposition.

    Every vertex v is replaced by its two copies 2v and 2v+1, so the
    width is at most 2*(width)+1.
    """
    return TreeDecomposition(
        td.parent, [[2 * v + c for v in bag for c in (0, 1)] for bag in td.bags]
    )
