"""Labeling scheme for graphs of bounded treewidth.

Every vertex u owns a clique K_u = {u} + out-neighbors in an acyclic
orientation of the chordal completion; the bidecomposition maps all of
K_u onto one root-to-leaf path, so a label stores the path, u's position
on it, and (depth, part index, real-edge flag) for each out-neighbor.
Adjacency of u and v is then decided by identifier membership: uv is an
edge iff one endpoint's identifier occurs with a true flag in the other's
neighbor list.

Label layout (big-endian fields, widths from the scheme meta):

  [tag:3][depth:D][path bits:depth][pw:P][part:pw][suffix len:D]
  [suffix bits][count:K]([depth:D][pw:P][part:pw][in-graph flag:1])*

Passing a vertex subset Q shortens the labels of Q to ~log|Q| leading
bits: the bidecomposition is built with the union of their cliques as
the prescribed set, which pins those vertices to shallow nodes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .bits import BitString, width_for
from .errors import DecodeError
from .graphs import Graph
from .separators import Bidecomposition, build_bidecomposition
from .treedec import (
    TreeDecomposition,
    chordal_orientation,
    completion_graph,
    validate_decomposition,
)

TW_TAG = 5  # 3-bit scheme tag at the head of every treewidth label

# Documented label-length budget: max bits <= log2 n + C*(k+1)*log2 log2 n + C0
# for the worst-case accounting below (tree height log2 n + 8, part size
# 6*(k+1)*max(8, ceil log2 n)).  Verified against tw_length_bound over
# n in [2^4, 2^20], k in [1, 12].
TW_LENGTH_C = 7
TW_LENGTH_C0 = 36


@dataclass(frozen=True)
class TwIdentifier:
    """Vertex identifier: depth of its node, index inside the node's part,
    and the root path packed into an int of ``depth`` bits."""

    depth: int
    part: int
    path: int


@dataclass
class TwMeta:
    """Field widths a decoder needs; travels with the archive, not with
    each label."""

    n: int
    k: int
    max_depth: int
    max_part_width: int

    @property
    def depth_bits(self) -> int:
        return width_for(self.max_depth)

    @property
    def part_width_bits(self) -> int:
        return width_for(self.max_part_width)

    @property
    def count_bits(self) -> int:
        return width_for(self.k)

    def runtime(self) -> tuple:
        return (
            self.depth_bits,
            self.part_width_bits,
            self.count_bits,
            self.k,
            self.max_depth,
        )

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "max_depth": self.max_depth,
            "max_part_width": self.max_part_width,
        }

    @classmethod
    def from_json(cls, obj) -> "TwMeta":
        return cls(
            int(obj["n"]),
            int(obj["k"]),
            int(obj["max_depth"]),
            int(obj["max_part_width"]),
        )


@dataclass
class TwEncoding:
    meta: TwMeta
    labels: list  # BitString per vertex
    identifiers: list  # TwIdentifier per vertex
    gamma_order: list  # per vertex: out-neighbor vertices in label order
    bidecomposition: Bidecomposition


def tw_encode(
    g: Graph,
    td: TreeDecomposition,
    q_vertices=(),
    check: bool = True,
) -> TwEncoding:
    """Encode g (treewidth <= width(td)) into per-vertex labels.

    Vertices of ``q_vertices`` receive labels of length about
    log2 |Q| + O(k log log n) instead of log2 n + O(k log log n).
    """
    q_vertices = sorted(set(q_vertices))
    if q_vertices and (q_vertices[0] < 0 or q_vertices[-1] >= g.n):
        raise ValueError("Q contains vertices outside the graph")
    if check:
        report = validate_decomposition(g, td)
        if not report.ok:
            raise ValueError(
                "invalid tree decomposition: " + "; ".join(report.problems[:5])
            )
    orientation = chordal_orientation(g, td)
    gplus = completion_graph(g, td)
    prescribed = set()
    for u in q_vertices:
        prescribed.update(orientation.clique_of(u))
    bd = build_bidecomposition(gplus, td, sorted(prescribed))

    k = max(td.width, 0)
    node_pw = [width_for(len(p) - 1) if p else 0 for p in bd.parts]
    meta = TwMeta(
        n=g.n,
        k=k,
        max_depth=bd.height,
        max_part_width=max(node_pw, default=0),
    )
    wd = meta.depth_bits
    wp = meta.part_width_bits
    wk = meta.count_bits

    labels = []
    identifiers = []
    gamma_order = []
    for u in range(g.n):
        x = bd.alpha[u]
        depth_u = bd.depth[x]
        ident = TwIdentifier(depth_u, bd.part_index[u], bd.path[x])
        identifiers.append(ident)
        entries = sorted(
            (
                (bd.depth[bd.alpha[v]], bd.part_index[v], v, flag)
                for v, flag in orientation.out[u]
            ),
        )
        gamma_order.append(tuple(e[2] for e in entries))
        deepest = x
        for _, _, v, _ in entries:
            if bd.depth[bd.alpha[v]] > bd.depth[deepest]:
                deepest = bd.alpha[v]
        suffix_len = bd.depth[deepest] - depth_u
        suffix = bd.path[deepest] & ((1 << suffix_len) - 1)

        b = BitString()
        b.write(TW_TAG, 3)
        b.write(depth_u, wd)
        b.write(ident.path, depth_u)
        pw = node_pw[x]
        b.write(pw, wp)
        b.write(ident.part, pw)
        b.write(suffix_len, wd)
        b.write(suffix, suffix_len)
        b.write(len(entries), wk)
        for d_v, part_v, v, flag in entries:
            b.write(d_v, wd)
            pw_v = node_pw[bd.alpha[v]]
            b.write(pw_v, wp)
            b.write(part_v, pw_v)
            b.write(1 if flag else 0, 1)
        labels.append(b)
    return TwEncoding(meta, labels, identifiers, gamma_order, bd)


def tw_iota(label: BitString, meta: TwMeta) -> TwIdentifier:
    """Extract the identifier from the fixed-position label head."""
    from . import _pykernels

    depth, part, path = _pykernels.tw_iota_raw(
        label.to_bytes(), len(label), meta.runtime()
    )
    return TwIdentifier(depth, part, path)


def tw_gamma(label: BitString, meta: TwMeta) -> list:
    """Out-neighbor identifiers with their in-graph flags, ordered by
    (depth, part index); at most k entries."""
    from . import _pykernels

    parsed = _pykernels.parse_tw(label.to_bytes(), 0, len(label), meta.runtime(), True)
    return [
        (TwIdentifier(d, p, path), bool(flag)) for d, p, path, flag in parsed[5]
    ]


def tw_adjacent(a: BitString, b: BitString, meta: TwMeta) -> bool:
    """Decide adjacency from two labels alone (plus the scheme meta)."""
    if a == b:
        raise ValueError("identical labels")
    from .backend import get_backend

    return bool(
        get_backend().tw_adjacent(
            a.to_bytes(), len(a), b.to_bytes(), len(b), meta.runtime()
        )
    )


def tw_length_bound(n: int, k: int) -> int:
    """Exact worst-case bit count of the layout under the bidecomposition
    guarantees; the (C, C0) budget dominates this for the tested range."""
    if n <= 1:
        return 16
    log_n = math.ceil(math.log2(n))
    d_cap = log_n + 8
    p_cap = min(n, 6 * (k + 1) * max(8, log_n))
    pw_cap = width_for(max(p_cap - 1, 0))
    wd = width_for(d_cap)
    wp = width_for(pw_cap)
    wk = width_for(k)
    return (
        3 + wd + d_cap + wp + pw_cap + wd + wk + k * (wd + wp + pw_cap + 1)
    )


def tw_q_length_bound(n: int, k: int, q: int) -> int:
    """Worst-case bits for a label of a prescribed vertex (set size q)."""
    if n <= 1:
        return 16
    log_n = math.ceil(math.log2(n))
    s_cap = max(2, (k + 1) * q)
    d_cap = math.ceil(math.log2(s_cap)) + 8
    p_cap = min(n, 6 * (k + 1) * max(8, log_n))
    pw_cap = width_for(max(p_cap - 1, 0))
    wd = width_for(log_n + 8)
    wp = width_for(pw_cap)
    wk = width_for(k)
    return (
        3 + wd + d_cap + wp + pw_cap + wd + wk + k * (wd + wp + pw_cap + 1)
    )
