"""Pure-Python decoder kernels.

One of two interchangeable backends (see backend.py); the compiled
extension mirrors these semantics bit for bit.  Labels arrive as
(bytes, bit length) pairs plus the flattened runtime meta tuples built
by the scheme modules:

  tw   = (depth_bits, part_width_bits, count_bits, k, max_depth)
  prod = (kappa_len_bits, coord_len_bits, coord_value_bits, compressed,
          adj_bits, d, *tw)
  flat = (len1_bits, *tw_of_lambda1, *prod_of_lambda2)

Every parse enforces exact field consumption and rejects bad tags or
out-of-range values with DecodeError, so single bit flips surface as
decode failures or adjacency mismatches rather than silent corruption.
"""

from __future__ import annotations

import numpy as np

from .errors import DecodeError

BACKEND_NAME = "py"

TW_TAG = 5

# coordinate field tags (compressed mode); PLAIN marks uncompressed values
COORD_ZERO = 0
COORD_ONE = 1
COORD_MIDDLE = 2
COORD_D_MINUS_1 = 3
COORD_D = 4
COORD_PLAIN = 5

FAR = 2  # coordinate difference outside {-1, 0, 1}


def _acc_of(data: bytes, bitlen: int):
    if bitlen > len(data) * 8:
        raise DecodeError("bit length exceeds payload")
    return int.from_bytes(data, "big") >> (len(data) * 8 - bitlen)


def parse_tw(data: bytes, offset: int, length: int, rt, want_entries: bool):
    """Parse a treewidth label occupying bits [offset, offset+length).

    Returns (depth, part, path, full_len, full_path, entries) where
    entries is a tuple of (depth, part, path, flag) identifiers.
    """
    acc = _acc_of(data, offset + length) & ((1 << length) - 1)
    return _parse_tw_acc(acc, length, rt, want_entries)


def _parse_tw_acc(acc: int, length: int, rt, want_entries: bool):
    wd, wp, wk, k, max_depth = rt
    pos = 0

    def read(width):
        nonlocal pos
        if pos + width > length:
            raise DecodeError("treewidth label underflow")
        pos += width
        return (acc >> (length - pos)) & ((1 << width) - 1)

    if read(3) != TW_TAG:
        raise DecodeError("bad treewidth label tag")
    depth = read(wd)
    if depth > max_depth:
        raise DecodeError("depth exceeds scheme maximum")
    path = read(depth)
    pw = read(wp)
    part = read(pw)
    suffix_len = read(wd)
    if depth + suffix_len > max_depth:
        raise DecodeError("path length exceeds scheme maximum")
    suffix = read(suffix_len)
    full_len = depth + suffix_len
    full_path = (path << suffix_len) | suffix
    count = read(wk)
    if count > k:
        raise DecodeError("neighbor count exceeds width bound")
    entries = []
    for _ in range(count):
        d = read(wd)
        if d > full_len:
            raise DecodeError("neighbor depth outside the stored path")
        pw_v = read(wp)
        part_v = read(pw_v)
        flag = read(1)
        if want_entries:
            entries.append((d, part_v, full_path >> (full_len - d), flag))
    if pos != length:
        raise DecodeError("trailing bits in treewidth label")
    return (depth, part, path, full_len, full_path, tuple(entries))


def tw_iota_raw(data: bytes, bitlen: int, rt):
    """Identifier triple from the label head (constant-width field reads)."""
    wd, wp, _, _, max_depth = rt
    acc = _acc_of(data, bitlen)
    pos = 0

    def read(width):
        nonlocal pos
        if pos + width > bitlen:
            raise DecodeError("treewidth label underflow")
        pos += width
        return (acc >> (bitlen - pos)) & ((1 << width) - 1)

    if read(3) != TW_TAG:
        raise DecodeError("bad treewidth label tag")
    depth = read(wd)
    if depth > max_depth:
        raise DecodeError("depth exceeds scheme maximum")
    path = read(depth)
    pw = read(wp)
    part = read(pw)
    return (depth, part, path)


def _tw_pair(pa, pb) -> bool:
    ida = (pa[0], pa[1], pa[2])
    idb = (pb[0], pb[1], pb[2])
    for d, p, path, flag in pa[5]:
        if flag and (d, p, path) == idb:
            return True
    for d, p, path, flag in pb[5]:
        if flag and (d, p, path) == ida:
            return True
    return False


def tw_adjacent(a: bytes, alen: int, b: bytes, blen: int, rt) -> int:
    pa = parse_tw(a, 0, alen, rt, True)
    pb = parse_tw(b, 0, blen, rt, True)
    return 1 if _tw_pair(pa, pb) else 0


def tw_matrix(datas, lens, rt) -> np.ndarray:
    n = len(datas)
    parsed = [parse_tw(datas[i], 0, lens[i], rt, True) for i in range(n)]
    idents = [(p[0], p[1], p[2]) for p in parsed]
    flagged = [
        frozenset((d, pp, path) for d, pp, path, flag in p[5] if flag)
        for p in parsed
    ]
    out = np.zeros((n, n), dtype=np.uint8)
    for i in range(n):
        fi = flagged[i]
        ii = idents[i]
        for j in range(i + 1, n):
            if idents[j] in fi or ii in flagged[j]:
                out[i, j] = out[j, i] = 1
    return out


def tw_pairs(datas, lens, rt, pairs):
    cache = {}

    def parsed(i):
        if i not in cache:
            cache[i] = parse_tw(datas[i], 0, lens[i], rt, True)
        return cache[i]

    return [1 if _tw_pair(parsed(i), parsed(j)) else 0 for i, j in pairs]


# --- product labels ---------------------------------------------------------


def parse_product(data: bytes, offset: int, length: int, rt):
    """Parse a product label: (kappa parse, coord tag, coord value, adj int).

    Coordinate value is None only for the D tag (decoders never need d).
    """
    klb, clb, cvb, compressed, adj_bits, d, *tw_rt = rt
    acc = _acc_of(data, offset + length) & ((1 << length) - 1)
    pos = 0

    def read(width):
        nonlocal pos
        if pos + width > length:
            raise DecodeError("product label underflow")
        pos += width
        return (acc >> (length - pos)) & ((1 << width) - 1)

    len_kappa = read(klb)
    len_coord = read(clb)
    if pos + len_kappa + len_coord + adj_bits != length:
        raise DecodeError("product label length fields inconsistent")
    kappa_acc = read(len_kappa)
    kappa = _parse_tw_acc(kappa_acc, len_kappa, tuple(tw_rt), True)
    if compressed:
        tag = read(3)
        if tag > COORD_D:
            raise DecodeError("bad coordinate tag")
        if tag in (COORD_ONE, COORD_MIDDLE, COORD_D_MINUS_1):
            value = read(cvb)
            if len_coord != 3 + cvb:
                raise DecodeError("coordinate field length mismatch")
        else:
            value = 0 if tag == COORD_ZERO else None
            if len_coord != 3:
                raise DecodeError("coordinate field length mismatch")
        if tag == COORD_ONE and value != 1:
            raise DecodeError("coordinate tagged 1 stores a different value")
        if tag == COORD_D_MINUS_1 and value != d - 1:
            raise DecodeError("coordinate tagged d-1 stores a different value")
        if tag == COORD_MIDDLE and not 2 <= value <= d - 2:
            raise DecodeError("middle coordinate out of range")
    else:
        tag = COORD_PLAIN
        value = read(cvb)
        if len_coord != cvb:
            raise DecodeError("coordinate field length mismatch")
        if value > d:
            raise DecodeError("coordinate exceeds path length")
    adj = read(adj_bits)
    if pos != length:
        raise DecodeError("trailing bits in product label")
    return (kappa, tag, value, adj)


def coord_diff_codes(tag_a, val_a, tag_b, val_b) -> int:
    """Signed difference a-b if within {-1,0,1}, else FAR; never needs d."""
    if tag_a == COORD_D or tag_b == COORD_D:
        if tag_a == tag_b:
            return 0
        if tag_a == COORD_D:
            return 1 if tag_b == COORD_D_MINUS_1 else FAR
        return -1 if tag_a == COORD_D_MINUS_1 else FAR
    diff = val_a - val_b
    return diff if -1 <= diff <= 1 else FAR


def product_adjacent(a: bytes, alen: int, b: bytes, blen: int, rt) -> int:
    pa = parse_product(a, 0, alen, rt)
    pb = parse_product(b, 0, blen, rt)
    return 1 if _product_pair_w(pa, pb, rt[4]) else 0


def _product_pair_w(pa, pb, adj_bits) -> bool:
    (ka, tag_a, val_a, adj_a) = pa
    (kb, tag_b, val_b, adj_b) = pb
    ida = (ka[0], ka[1], ka[2])
    idb = (kb[0], kb[1], kb[2])
    side = p = None
    if ida == idb:
        side, p = 0, 0
    else:
        for idx, (d, pp, path, _) in enumerate(ka[5]):
            if (d, pp, path) == idb:
                side, p = 0, idx + 1
                break
        if side is None:
            for idx, (d, pp, path, _) in enumerate(kb[5]):
                if (d, pp, path) == ida:
                    side, p = 1, idx + 1
                    break
    if side is None:
        return False
    if side == 0:
        t = coord_diff_codes(tag_b, val_b, tag_a, val_a)
        adj = adj_a
    else:
        t = coord_diff_codes(tag_a, val_a, tag_b, val_b)
        adj = adj_b
    if t == FAR:
        return False
    bit_index = 3 * p + t + 1
    return bool((adj >> (adj_bits - 1 - bit_index)) & 1)


def product_matrix(datas, lens, rt) -> np.ndarray:
    n = len(datas)
    adj_bits = rt[4]
    parsed = [parse_product(datas[i], 0, lens[i], rt) for i in range(n)]
    out = np.zeros((n, n), dtype=np.uint8)
    for i in range(n):
        pi = parsed[i]
        for j in range(i + 1, n):
            if _product_pair_w(pi, parsed[j], adj_bits):
                out[i, j] = out[j, i] = 1
    return out


def product_pairs(datas, lens, rt, pairs):
    adj_bits = rt[4]
    cache = {}

    def parsed(i):
        if i not in cache:
            cache[i] = parse_product(datas[i], 0, lens[i], rt)
        return cache[i]

    return [
        1 if _product_pair_w(parsed(i), parsed(j), adj_bits) else 0
        for i, j in pairs
    ]


# --- flat labels ------------------------------------------------------------


def parse_flat(data: bytes, bitlen: int, rt):
    """(is_border, lambda1 parse or None, lambda2 parse)."""
    len1_bits = rt[0]
    tw_rt = tuple(rt[1:6])
    prod_rt = tuple(rt[6:])
    acc = _acc_of(data, bitlen)
    if bitlen < 1:
        raise DecodeError("empty flat label")
    border = (acc >> (bitlen - 1)) & 1
    pos = 1
    l1 = None
    if border:
        if pos + len1_bits > bitlen:
            raise DecodeError("flat label underflow")
        n1 = (acc >> (bitlen - pos - len1_bits)) & ((1 << len1_bits) - 1)
        pos += len1_bits
        if pos + n1 > bitlen:
            raise DecodeError("flat label underflow")
        l1 = parse_tw(data, pos, n1, tw_rt, True)
        pos += n1
    l2 = parse_product(data, pos, bitlen - pos, prod_rt)
    return (border, l1, l2)


def _flat_pair(pa, pb, adj_bits) -> bool:
    if pa[0] and pb[0] and _tw_pair(pa[1], pb[1]):
        return True
    return _product_pair_w(pa[2], pb[2], adj_bits)


def flat_adjacent(a: bytes, alen: int, b: bytes, blen: int, rt) -> int:
    pa = parse_flat(a, alen, rt)
    pb = parse_flat(b, blen, rt)
    return 1 if _flat_pair(pa, pb, rt[10]) else 0


def flat_matrix(datas, lens, rt) -> np.ndarray:
    n = len(datas)
    adj_bits = rt[10]
    parsed = [parse_flat(datas[i], lens[i], rt) for i in range(n)]
    out = np.zeros((n, n), dtype=np.uint8)
    for i in range(n):
        pi = parsed[i]
        for j in range(i + 1, n):
            if _flat_pair(pi, parsed[j], adj_bits):
                out[i, j] = out[j, i] = 1
    return out


def flat_pairs(datas, lens, rt, pairs):
    adj_bits = rt[10]
    cache = {}

    def parsed(i):
        if i not in cache:
            cache[i] = parse_flat(datas[i], lens[i], rt)
        return cache[i]

    return [1 if _flat_pair(parsed(i), parsed(j), adj_bits) else 0 for i, j in pairs]
