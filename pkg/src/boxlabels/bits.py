"""Bit-exact, self-delimiting encoding primitives.

All label formats are built from two operations: fixed-width unsigned
fields and length-prefixed payloads.  Bits are big-endian within a field
and fields are packed back to back, so lexicographic comparison of two
streams equals numeric comparison of their fields in write order.  The
final byte of the serialized form is zero-padded; the bit length travels
separately (archive records store it explicitly).
"""

from __future__ import annotations

from .errors import DecodeError


class BitString:
    """Append-only bit sequence backed by a Python int accumulator."""

    __slots__ = ("_acc", "_nbits")

    def __init__(self):
        self._acc = 0
        self._nbits = 0

    def __len__(self):
        return self._nbits

    def __eq__(self, other):
        if not isinstance(other, BitString):
            return NotImplemented
        return self._nbits == other._nbits and self._acc == other._acc

    def __hash__(self):
        return hash((self._nbits, self._acc))

    def write(self, value: int, width: int) -> "BitString":
        """Append ``value`` as exactly ``width`` big-endian bits."""
        if width < 0:
            raise ValueError("negative field width")
        if value < 0 or value >> width:
            raise OverflowError(f"value {value} does not fit in {width} bits")
        self._acc = (self._acc << width) | value
        self._nbits += width
        return self

    def write_bits(self, other: "BitString") -> "BitString":
        self._acc = (self._acc << len(other)) | other._acc
        self._nbits += len(other)
        return self

    def write_prefixed(self, payload: "BitString", prefix_width: int) -> "BitString":
        """Append a ``prefix_width``-bit length field followed by the payload."""
        self.write(len(payload), prefix_width)
        self.write_bits(payload)
        return self

    def bit(self, i: int) -> int:
        if not 0 <= i < self._nbits:
            raise IndexError("bit index out of range")
        return (self._acc >> (self._nbits - 1 - i)) & 1

    def to01(self) -> str:
        return format(self._acc, f"0{self._nbits}b") if self._nbits else ""

    def to_bytes(self) -> bytes:
        """Serialize, zero-padding only the final byte."""
        nbytes = (self._nbits + 7) // 8
        pad = nbytes * 8 - self._nbits
        return (self._acc << pad).to_bytes(nbytes, "big")

    @classmethod
    def from_bytes(cls, data: bytes, bitlen: int) -> "BitString":
        if bitlen > len(data) * 8 or bitlen < 0:
            raise DecodeError("bit length inconsistent with byte payload")
        s = cls()
        acc = int.from_bytes(data, "big")
        s._acc = acc >> (len(data) * 8 - bitlen)
        s._nbits = bitlen
        return s

    @classmethod
    def from01(cls, text: str) -> "BitString":
        s = cls()
        for ch in text:
            s.write(int(ch), 1)
        return s


class BitReader:
    """Cursor over a BitString or (bytes, bitlen) pair.

    Reads consume exactly the requested width; running past the end
    raises DecodeError.
    """

    __slots__ = ("_acc", "_nbits", "pos")

    def __init__(self, source, bitlen: int | None = None):
        if isinstance(source, BitString):
            self._acc = source._acc
            self._nbits = len(source)
        else:
            if bitlen is None:
                raise ValueError("bitlen required for byte input")
            s = BitString.from_bytes(source, bitlen)
            self._acc = s._acc
            self._nbits = bitlen
        self.pos = 0

    @property
    def remaining(self) -> int:
        return self._nbits - self.pos

    def read(self, width: int) -> int:
        if width < 0:
            raise ValueError("negative field width")
        if self.pos + width > self._nbits:
            raise DecodeError("bit stream underflow")
        self.pos += width
        return (self._acc >> (self._nbits - self.pos)) & ((1 << width) - 1)

    def read_bits(self, count: int) -> BitString:
        value = self.read(count)
        out = BitString()
        out.write(value, count)
        return out

    def read_prefixed(self, prefix_width: int) -> BitString:
        return self.read_bits(self.read(prefix_width))


def width_for(max_value: int) -> int:
    """Smallest field width able to hold every value in [0, max_value]."""
    if max_value < 0:
        raise ValueError("negative maximum")
    return max_value.bit_length()
