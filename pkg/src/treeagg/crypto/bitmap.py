"""Participation bitmaps: which validators contributed to an aggregate.

A bitmap covers a contiguous window of the global index space: bit j refers
to global index offset + j.  Bits are stored in one Python int (bit j of
`bits`), which keeps unions, intersections, and popcounts at C speed even for
million-bit maps.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ParticipationBitmap:
    offset: int
    length: int
    bits: int

    def __post_init__(self):
        if self.length < 0 or self.offset < 0:
            raise ValueError("offset and length must be nonnegative")
        if self.bits < 0 or self.bits >> self.length:
            raise ValueError("bits outside the declared length")

    # -- constructors ---------------------------------------------------

    @classmethod
    def empty(cls, offset: int, length: int) -> "ParticipationBitmap":
        return cls(offset, length, 0)

    @classmethod
    def full(cls, offset: int, length: int) -> "ParticipationBitmap":
        return cls(offset, length, (1 << length) - 1)

    @classmethod
    def from_indices(cls, offset: int, length: int, indices) -> "ParticipationBitmap":
        bits = 0
        for g in indices:
            j = g - offset
            if not 0 <= j < length:
                raise ValueError(f"global index {g} outside window [{offset}, {offset + length})")
            bits |= 1 << j
        return cls(offset, length, bits)

    # -- queries ---------------------------------------------------------

    @property
    def popcount(self) -> int:
        return self.bits.bit_count()

    @property
    def end(self) -> int:
        return self.offset + self.length

    def contains(self, global_index: int) -> bool:
        j = global_index - self.offset
        return 0 <= j < self.length and bool(self.bits >> j & 1)

    def global_indices(self):
        bits = self.bits
        base = self.offset
        while bits:
            low = bits & -bits
            yield base + low.bit_length() - 1
            bits ^= low

    def is_disjoint(self, other: "ParticipationBitmap") -> bool:
        shift = other.offset - self.offset
        if shift >= 0:
            return not (self.bits & (other.bits << shift))
        return not ((self.bits << -shift) & other.bits)

    def is_subset_of(self, other: "ParticipationBitmap") -> bool:
        if self.bits == 0:
            return True
        offset = min(self.offset, other.offset)
        a = self.bits << (self.offset - offset)
        b = other.bits << (other.offset - offset)
        return not (a & ~b)

    # -- combining --------------------------------------------------------

    def union(self, other: "ParticipationBitmap") -> "ParticipationBitmap":
        offset = min(self.offset, other.offset)
        end = max(self.end, other.end)
        bits = (self.bits << (self.offset - offset)) | (other.bits << (other.offset - offset))
        return ParticipationBitmap(offset, end - offset, bits)

    def difference(self, other: "ParticipationBitmap") -> "ParticipationBitmap":
        shift = other.offset - self.offset
        masked = other.bits << shift if shift >= 0 else other.bits >> -shift
        return ParticipationBitmap(self.offset, self.length, self.bits & ~masked & ((1 << self.length) - 1))

    def complement(self) -> "ParticipationBitmap":
        return ParticipationBitmap(self.offset, self.length, ~self.bits & ((1 << self.length) - 1))

    # -- wire format -------------------------------------------------------

    def to_bytes(self) -> bytes:
        packed = self.bits.to_bytes((self.length + 7) // 8, "little") if self.length else b""
        return self.offset.to_bytes(8, "big") + self.length.to_bytes(4, "big") + packed

    @classmethod
    def from_bytes(cls, data: bytes) -> "ParticipationBitmap":
        if len(data) < 12:
            raise ValueError("bitmap encoding too short")
        offset = int.from_bytes(data[0:8], "big")
        length = int.from_bytes(data[8:12], "big")
        nbytes = (length + 7) // 8
        if len(data) != 12 + nbytes:
            raise ValueError("bitmap encoding length mismatch")
        bits = int.from_bytes(data[12:], "little")
        return cls(offset, length, bits)
