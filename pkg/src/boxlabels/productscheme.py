"""Labeling scheme for subgraphs of host ⊠ path with a short path.

A label is [len(kappa)][len(coord)][kappa][coordinate][adjacency code]:
kappa is the treewidth label of the host vertex, the coordinate is the
path position, and the adjacency code stores three bits (shift -1/0/+1)
for the own host vertex and for each entry of its neighbor list, saying
whether the edge to the unique vertex at that product position exists.
Decoding matches one label's host identifier inside the other's neighbor
list; the match position and the coordinate difference address one code
bit, read from the matching side.

Coordinate compression spends 3 tag bits classifying the position as
0, 1, d-1, d, or strictly between; the value itself is stored for the
middle three tags only, which keeps endpoint coordinates O(1) bits and
the difference test independent of d.  Tags collide for d <= 3, so
compression silently stays off there (recorded in the meta).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ._pykernels import (
    COORD_D,
    COORD_D_MINUS_1,
    COORD_MIDDLE,
    COORD_ONE,
    COORD_PLAIN,
    COORD_ZERO,
    FAR,
    coord_diff_codes,
)
from .bits import BitString, width_for
from .errors import EmbeddingError
from .graphs import Graph, ProductEmbedding, validate_embedding
from .treedec import TreeDecomposition
from .twscheme import TwEncoding, TwMeta, tw_encode, tw_length_bound, tw_q_length_bound

# max bits <= log2 n + log2(d+1) + C*(k+1)*log2 log2 n + C0 (see docs/formats.md)
PRODUCT_LENGTH_C = 7
PRODUCT_LENGTH_C0 = 58


@dataclass(frozen=True)
class CoordField:
    """Decoded coordinate: a tag and, for tags that store one, the value.

    Tag D stores no value; comparisons never need to know d.
    """

    tag: int
    value: int | None = None


def encode_coord(i: int, d: int) -> CoordField:
    """Compressed classification of coordinate i on a path of length d >= 4."""
    if i == 0:
        return CoordField(COORD_ZERO, None)
    if i == d:
        return CoordField(COORD_D, None)
    if i == 1:
        return CoordField(COORD_ONE, 1)
    if i == d - 1:
        return CoordField(COORD_D_MINUS_1, i)
    return CoordField(COORD_MIDDLE, i)


def coord_diff(a: CoordField, b: CoordField):
    """Signed difference a - b when it lies in {-1, 0, +1}, else None."""
    va = a.value if a.tag != COORD_PLAIN else a.value
    diff = coord_diff_codes(a.tag, va, b.tag, b.value)
    return None if diff == FAR else diff


@dataclass
class ProductMeta:
    n: int
    d: int
    k: int
    compressed: bool
    max_kappa_bits: int
    max_coord_bits: int
    tw: TwMeta

    @property
    def coord_value_bits(self) -> int:
        return width_for(self.d)

    @property
    def kappa_len_bits(self) -> int:
        return width_for(self.max_kappa_bits)

    @property
    def coord_len_bits(self) -> int:
        return width_for(self.max_coord_bits)

    @property
    def adj_bits(self) -> int:
        return 3 * (self.k + 1)

    def runtime(self) -> tuple:
        return (
            self.kappa_len_bits,
            self.coord_len_bits,
            self.coord_value_bits,
            1 if self.compressed else 0,
            self.adj_bits,
            self.d,
        ) + self.tw.runtime()

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "k": self.k,
            "compressed": self.compressed,
            "max_kappa_bits": self.max_kappa_bits,
            "max_coord_bits": self.max_coord_bits,
            "tw": self.tw.to_json(),
        }

    @classmethod
    def from_json(cls, obj) -> "ProductMeta":
        return cls(
            int(obj["n"]),
            int(obj["d"]),
            int(obj["k"]),
            bool(obj["compressed"]),
            int(obj["max_kappa_bits"]),
            int(obj["max_coord_bits"]),
            TwMeta.from_json(obj["tw"]),
        )


@dataclass
class ProductEncoding:
    meta: ProductMeta
    labels: list
    host_encoding: TwEncoding


def product_encode(
    g: Graph,
    e: ProductEmbedding,
    td_host: TreeDecomposition,
    q_vertices=(),
    compress_endpoints: bool = False,
    check: bool = True,
) -> ProductEncoding:
    """Labels for a graph given with an embedding into host ⊠ path.

    Vertices of ``q_vertices`` inherit short host labels (their host
    vertices form the prescribed set of the treewidth scheme); with
    ``compress_endpoints`` their coordinate cost drops to O(1) bits when
    they sit at the ends of the path.
    """
    if check:
        report = validate_embedding(g, e)
        if not report.ok:
            raise EmbeddingError("; ".join(report.problems[:5]))

    host, td, placement = _pruned_host(e, td_host)
    d_eff = max((i for _, i in placement), default=0)
    compressed = compress_endpoints and d_eff >= 4
    host_q = sorted({placement[u][0] for u in q_vertices})
    twenc = tw_encode(host, td, host_q, check=check)
    k = twenc.meta.k

    position = {}
    for u, vi in enumerate(placement):
        position[vi] = u

    cvb = width_for(d_eff)
    coord_fields = []
    for u, (_, i) in enumerate(placement):
        if compressed:
            cf = encode_coord(i, d_eff)
            coord_fields.append((cf, 3 if cf.value is None or cf.tag in (COORD_ZERO, COORD_D) else 3 + cvb))
        else:
            coord_fields.append((CoordField(COORD_PLAIN, i), cvb))

    meta = ProductMeta(
        n=g.n,
        d=d_eff,
        k=k,
        compressed=compressed,
        max_kappa_bits=max((len(b) for b in twenc.labels), default=0),
        max_coord_bits=max((wbits for _, wbits in coord_fields), default=0),
        tw=twenc.meta,
    )
    klb = meta.kappa_len_bits
    clb = meta.coord_len_bits
    adj_bits = meta.adj_bits

    labels = []
    for u, (v, i) in enumerate(placement):
        kappa = twenc.labels[v]
        cf, coord_bits = coord_fields[u]
        b = BitString()
        b.write(len(kappa), klb)
        b.write(coord_bits, clb)
        b.write_bits(kappa)
        if compressed:
            b.write(cf.tag, 3)
            if cf.tag in (COORD_ONE, COORD_MIDDLE, COORD_D_MINUS_1):
                b.write(cf.value, cvb)
        else:
            b.write(cf.value, cvb)
        candidates = (v,) + twenc.gamma_order[v]
        code = 0
        for p in range(k + 1):
            v2 = candidates[p] if p < len(candidates) else None
            for t in (-1, 0, 1):
                code <<= 1
                if v2 is not None:
                    u2 = position.get((v2, i + t))
                    if u2 is not None and g.has_edge(u, u2):
                        code |= 1
        b.write(code, adj_bits)
        labels.append(b)
    return ProductEncoding(meta, labels, twenc)


def _pruned_host(e: ProductEmbedding, td_host: TreeDecomposition):
    """Restrict host graph and decomposition to used host vertices.

    Coordinates are left untouched (endpoint tags must stay meaningful)."""
    used = sorted({v for v, _ in e.placement})
    if len(used) == e.host.n:
        return e.host, td_host, list(e.placement)
    remap = {v: idx for idx, v in enumerate(used)}
    host = Graph(
        len(used),
        [(remap[u], remap[v]) for u, v in e.host.edges if u in remap and v in remap],
    )
    td = TreeDecomposition(
        td_host.parent,
        [[remap[v] for v in bag if v in remap] for bag in td_host.bags],
    )
    placement = [(remap[v], i) for v, i in e.placement]
    return host, td, placement


def product_adjacent(a: BitString, b: BitString, meta: ProductMeta) -> bool:
    """Decide adjacency in the encoded graph from two labels."""
    if a == b:
        raise ValueError("identical labels")
    from .backend import get_backend

    return bool(
        get_backend().product_adjacent(
            a.to_bytes(), len(a), b.to_bytes(), len(b), meta.runtime()
        )
    )


def product_length_bound(n: int, d: int, k: int) -> int:
    """Worst-case label bits for the layout (plain coordinates)."""
    twb = tw_length_bound(n, k)
    cvb = width_for(max(d, 0))
    return width_for(twb) + width_for(3 + cvb) + twb + cvb + 3 * (k + 1)


def product_q_length_bound(n: int, d: int, k: int, q: int) -> int:
    """Worst-case bits for a prescribed vertex at a path endpoint."""
    twb = tw_length_bound(n, k)
    qb = tw_q_length_bound(n, k, q)
    cvb = width_for(max(d, 0))
    return width_for(twb) + width_for(3 + cvb) + qb + 3 + 3 * (k + 1)
