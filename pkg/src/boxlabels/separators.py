"""Balanced separators and the recursive bidecomposition construction.

A bidecomposition (T, alpha) maps vertices to nodes of a rooted binary
tree so that the endpoints of every edge land on ancestor-related nodes.
It is built by recursively splitting the graph with a separator balanced
simultaneously for two weight functions: unit weights (halve the vertex
count) and the indicator of a prescribed set S (halve S as well), which
is what lets S-vertices sit at depth ~log|S| instead of ~log n.

Weights may be ints, Fractions, or floats.  The pipeline only ever uses
integer weights with a rational epsilon, so every comparison on the main
path is exact; float weights fall back to plain float comparisons with a
1e-9 relative slack on preconditions.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .graphs import Graph
from .treedec import TreeDecomposition

_FLOAT_SLACK = 1e-9


def default_epsilon(n: int) -> Fraction:
    """1 / max(8, ceil(log2 n)): rational, and small enough (<= 1/8) for
    the depth bound of the recursion to hold."""
    return Fraction(1, max(8, math.ceil(math.log2(n)) if n > 1 else 0))


def _as_eps(eps) -> Fraction | float:
    if isinstance(eps, (Fraction, int)):
        return Fraction(eps)
    return Fraction(eps)  # exact representation of the float


def tree_balanced_separator(parent, weights, eps) -> list:
    """Mark at most floor(1/eps) nodes of a rooted tree (or forest) so that
    every component of the remainder weighs at most eps * total.

    ``parent`` lists each node's parent index (-1 for roots) with parents
    preceding children.  Bottom-up sweep: a node is marked as soon as the
    unmarked weight accumulated under it reaches eps * total, which zeroes
    the running count for its ancestors.
    """
    eps = _as_eps(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    total = sum(weights)
    if not total:
        return []
    threshold = eps * total
    acc = list(weights)
    marked = []
    for x in range(len(parent) - 1, -1, -1):
        if acc[x] >= threshold:
            marked.append(x)
            acc[x] = 0
        if parent[x] >= 0:
            acc[parent[x]] += acc[x]
    marked.reverse()
    return marked


def _margins(parent, bags):
    """Per-node margin: bag minus parent's bag.  Margins partition the
    vertex set because every vertex's bag subtree is connected."""
    out = []
    bag_sets = [set(b) for b in bags]
    for x, bag in enumerate(bags):
        p = parent[x]
        if p < 0:
            out.append(list(bag))
        else:
            pset = bag_sets[p]
            out.append([v for v in bag if v not in pset])
    return out


def tw_balanced_separator(g: Graph, td: TreeDecomposition, weights, eps) -> list:
    """Vertex separator of size at most ceil(1/eps)*(width+1) leaving only
    components of weight at most eps * total, via the margin weights of the
    decomposition tree."""
    return sorted(
        _separator_from_bags(td.parent, td.bags, weights, eps)
    )


def _separator_from_bags(parent, bags, weights, eps) -> set:
    margins = _margins(parent, bags)
    node_w = [sum(weights[v] for v in mu) for mu in margins]
    marked = tree_balanced_separator(parent, node_w, eps)
    z = set()
    for x in marked:
        z.update(bags[x])
    return z


def two_weight_partition(items, w1, w2, eps):
    """Split ``items`` into (Y, Z) with both weight functions bounded by
    (1/2 + 3*eps) of their totals on both sides.

    Requires every single item to weigh at most eps * total under both
    functions.  Items are ordered by the sign rule on the normalized
    weight difference, which keeps every prefix sum within 2*eps; the cut
    goes after the first prefix reaching half the first weight.
    """
    eps = _as_eps(eps)
    items = list(items)
    w1 = list(w1)
    w2 = list(w2)
    if len(w1) != len(items) or len(w2) != len(items):
        raise ValueError("weights must parallel items")
    if any(w < 0 for w in w1) or any(w < 0 for w in w2):
        raise ValueError("negative weight")
    total1, total2 = sum(w1), sum(w2)
    exact = all(isinstance(w, (int, Fraction)) for w in w1 + w2)
    slack1 = 0 if exact else _FLOAT_SLACK * max(1.0, total1)
    slack2 = 0 if exact else _FLOAT_SLACK * max(1.0, total2)
    for i in range(len(items)):
        if w1[i] > eps * total1 + slack1 or w2[i] > eps * total2 + slack2:
            raise ValueError("element too heavy for the requested eps")
    return _signed_prefix_partition(items, w1, w2, total1, total2, eps, exact)


def _signed_prefix_partition(items, w1, w2, total1, total2, eps, exact):
    n = len(items)
    if total1 == 0 or total2 == 0:
        # degenerate branch: greedy fill against the weight that remains
        wt, total = (w2, total2) if total1 == 0 else (w1, total1)
        run = 0
        cut = 0
        while cut < n and run * 2 < total:
            run += wt[cut]
            cut += 1
        return items[:cut], items[cut:]

    # xi scaled by total1*total2 keeps integer weights integral
    xi = [w1[i] * total2 - w2[i] * total1 for i in range(n)]
    nonpos = [i for i in range(n) if xi[i] <= 0]
    pos = [i for i in range(n) if xi[i] > 0]
    bound = 2 * eps * total1 * total2
    slack = 0 if exact else _FLOAT_SLACK * float(total1 * total2)
    order = []
    running = 0
    a = b = 0
    for _ in range(n):
        if running >= 0:
            i = nonpos[a] if a < len(nonpos) else pos[b]
        else:
            i = pos[b] if b < len(pos) else nonpos[a]
        if a < len(nonpos) and i == nonpos[a]:
            a += 1
        else:
            b += 1
        order.append(i)
        running += xi[i]
        if abs(running) > bound + slack:
            raise AssertionError("prefix invariant violated")
    run1 = 0
    cut = 0
    while cut < n and run1 * 2 < total1:
        run1 += w1[order[cut]]
        cut += 1
    y_idx = order[:cut]
    z_idx = order[cut:]
    return [items[i] for i in y_idx], [items[i] for i in z_idx]


def _ratio(w, t):
    if isinstance(w, float) or isinstance(t, float):
        return w / t
    return Fraction(w, t)


def _components(g: Graph, member, excluded, verts):
    """Connected components of g[verts minus excluded], in vertex order."""
    comps = []
    seen = set(excluded)
    adj = g._adj
    for s in verts:
        if s in seen:
            continue
        comp = [s]
        seen.add(s)
        stack = [s]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if v not in seen and v in member:
                    seen.add(v)
                    comp.append(v)
                    stack.append(v)
        comps.append(sorted(comp))
    return comps


def split(g: Graph, td: TreeDecomposition, w1, w2, eps):
    """Partition V into (A, X, B): no A-B edge, X of size at most
    2*ceil(3/eps)*(width+1), and both weights of A and B at most
    (1/2 + eps) of their graph totals.

    X is the union of two separators computed at eps/3 (one per weight
    function); the surviving components are then grouped by the signed
    prefix rule.  The component weights are guaranteed small relative to
    the *graph* totals, so the grouping runs at the effective epsilon
    (never below eps/3) that makes its precondition hold by construction.
    """
    eps = _as_eps(eps)
    verts = list(range(g.n))
    a, x, b = _split_impl(
        g, td.parent, td.bags, verts, set(verts), list(w1), list(w2), eps
    )
    return a, x, b


def _split_impl(g, parent, bags, verts, member, w1, w2, eps):
    if not verts:
        return [], [], []
    sub_eps = eps / 3
    z1 = _separator_from_bags(parent, bags, w1, sub_eps)
    z2 = _separator_from_bags(parent, bags, w2, sub_eps)
    x = z1 | z2
    comps = _components(g, member, x, verts)
    if not comps:
        return [], sorted(x), []
    cw1 = [sum(w1[v] for v in c) for c in comps]
    cw2 = [sum(w2[v] for v in c) for c in comps]
    t1, t2 = sum(cw1), sum(cw2)
    eff = sub_eps
    if t1:
        eff = max(eff, max(_ratio(w, t1) for w in cw1))
    if t2:
        eff = max(eff, max(_ratio(w, t2) for w in cw2))
    y_group, z_group = _signed_prefix_partition(
        comps, cw1, cw2, t1, t2, eff,
        all(isinstance(w, (int, Fraction)) for w in cw1 + cw2),
    )
    a = sorted(v for c in y_group for v in c)
    b = sorted(v for c in z_group for v in c)
    return a, sorted(x), b


class Bidecomposition:
    """Rooted binary tree T plus alpha: vertex -> node.

    ``parts[x]`` enumerates alpha^{-1}(x) in ascending vertex order; a
    vertex's part index is its position there.  ``path[x]`` packs the
    left(0)/right(1) bits from the root to x into an int of ``depth[x]``
    bits, so ancestor-relatedness is a shift-and-compare.
    """

    __slots__ = ("n", "parent", "side", "depth", "path", "parts", "alpha", "part_index")

    def __init__(self, n):
        self.n = n
        self.parent = []
        self.side = []
        self.depth = []
        self.path = []
        self.parts = []
        self.alpha = [-1] * n
        self.part_index = [-1] * n

    @property
    def size(self) -> int:
        return len(self.parts)

    @property
    def height(self) -> int:
        return max(self.depth, default=0)

    def add_node(self, parent: int, side: int, part) -> int:
        x = len(self.parts)
        self.parent.append(parent)
        self.side.append(side)
        if parent < 0:
            self.depth.append(0)
            self.path.append(0)
        else:
            self.depth.append(self.depth[parent] + 1)
            self.path.append((self.path[parent] << 1) | side)
        self.parts.append(tuple(part))
        for idx, v in enumerate(part):
            self.alpha[v] = x
            self.part_index[v] = idx
        return x

    def related(self, x: int, y: int) -> bool:
        if self.depth[x] > self.depth[y]:
            x, y = y, x
        return self.path[x] == self.path[y] >> (self.depth[y] - self.depth[x])

    def validate(self, g: Graph) -> list:
        """Relatedness violations plus part-coverage problems, if any."""
        problems = []
        assigned = sorted(v for part in self.parts for v in part)
        if assigned != list(range(self.n)):
            problems.append("parts do not partition the vertex set")
        for u, v in sorted(g.edges):
            if not self.related(self.alpha[u], self.alpha[v]):
                problems.append(f"edge ({u},{v}) maps to unrelated nodes")
        return problems

    def to_json(self) -> str:
        return json.dumps(
            {
                "parent": self.parent,
                "side": self.side,
                "parts": [list(p) for p in self.parts],
            },
            separators=(",", ":"),
        )


def build_bidecomposition(g: Graph, td: TreeDecomposition, s_vertices, eps=None) -> Bidecomposition:
    """Bidecomposition of g with unit weights and the indicator of
    ``s_vertices`` as the second weight.

    Guarantees (with k the decomposition width and the default epsilon):
    tree height <= log2 n + 8, alpha(u) at depth <= log2 |S| + 8 for
    u in S, and parts of size at most 6*(k+1)*max(8, ceil(log2 n)).
    """
    n = g.n
    eps = default_epsilon(n) if eps is None else _as_eps(eps)
    if not 0 < eps <= Fraction(1, 8):
        raise ValueError("eps must lie in (0, 1/8]")
    s_flag = bytearray(n)
    for v in s_vertices:
        s_flag[v] = 1
    bd = Bidecomposition(n)
    if n == 0:
        return bd
    parent, bags = _parent_first(td)
    w1 = [1] * n
    w2 = [int(s_flag[v]) for v in range(n)]

    def recurse(verts, parent_arr, bag_arr, bd_parent, bd_side):
        member = set(verts)
        a, x, b = _split_impl(g, parent_arr, bag_arr, verts, member, w1, w2, eps)
        _check_split(verts, a, b, w1, w2, eps)
        node = bd.add_node(bd_parent, bd_side, x)
        if a:
            pa, ba = _restrict_forest(parent_arr, bag_arr, set(a))
            recurse(a, pa, ba, node, 0)
        if b:
            pb, bb = _restrict_forest(parent_arr, bag_arr, set(b))
            recurse(b, pb, bb, node, 1)

    recurse(list(range(n)), parent, bags, -1, 0)
    return bd


def _check_split(verts, a, b, w1, w2, eps):
    t1 = sum(w1[v] for v in verts)
    t2 = sum(w2[v] for v in verts)
    for side in (a, b):
        s1 = sum(w1[v] for v in side)
        s2 = sum(w2[v] for v in side)
        if s1 > (Fraction(1, 2) + eps) * t1 or s2 > (Fraction(1, 2) + eps) * t2:
            raise RuntimeError("split postcondition violated")


def _parent_first(td: TreeDecomposition):
    """Reorder decomposition nodes so parents precede children."""
    order = []
    children = td.children()
    roots = [x for x, p in enumerate(td.parent) if p < 0]
    for r in roots:
        stack = [r]
        while stack:
            x = stack.pop()
            order.append(x)
            stack.extend(reversed(children[x]))
    new_id = {x: i for i, x in enumerate(order)}
    parent = [new_id[td.parent[x]] if td.parent[x] >= 0 else -1 for x in order]
    bags = [list(td.bags[x]) for x in order]
    return parent, bags


def _restrict_forest(parent, bags, keep):
    """Bags intersected with ``keep``; empty nodes are contracted away,
    children re-attaching to the nearest surviving ancestor."""
    new_parent = []
    new_bags = []
    nearest = [-1] * len(parent)
    for x, bag in enumerate(bags):
        p = parent[x]
        anc = nearest[p] if p >= 0 else -1
        nb = [v for v in bag if v in keep]
        if nb:
            nearest[x] = len(new_bags)
            new_parent.append(anc)
            new_bags.append(nb)
        else:
            nearest[x] = anc
    return new_parent, new_bags
