"""Bounded-universe curvature tallies backed by a bit vector.

The universe is [1, X]; distinct membership lives in one bit per integer,
so X is capped at 2^31 to keep a tally under 256 MiB.  Multiplicity is a
plain counter.  Both merge commutatively, which is what makes
multi-threaded enumeration scheduling-independent.
"""

from __future__ import annotations

import numpy as np

from .errors import ArithmeticRangeError, ValidationError

UNIVERSE_CAP = 2**31


def bit_vector(bound: int) -> bytearray:
    """Zeroed membership bit vector for the universe [1, bound]."""
    if bound < 1:
        raise ValidationError(f"universe bound must be >= 1, got {bound}")
    if bound > UNIVERSE_CAP:
        raise ArithmeticRangeError(
            f"universe bound {bound} exceeds the 2^31 tally cap (bit vector would pass 256 MiB)"
        )
    return bytearray((bound >> 3) + 1)


def popcount(bits: bytearray) -> int:
    return int.from_bytes(bits, "little").bit_count()


def bits_to_array(bits: bytearray, bound: int) -> np.ndarray:
    """Sorted array of members of the bit vector, restricted to [1, bound]."""
    unpacked = np.unpackbits(np.frombuffer(bytes(bits), dtype=np.uint8), bitorder="little")
    members = np.nonzero(unpacked)[0]
    return members[(members >= 1) & (members <= bound)]


def or_bits(dst: bytearray, src: bytearray) -> None:
    """In-place bitwise OR (commutative merge of distinct sets)."""
    a = np.frombuffer(dst, dtype=np.uint8)
    b = np.frombuffer(bytes(src), dtype=np.uint8)
    np.bitwise_or(a, b, out=a)


def and_popcount(a: bytearray, b: bytearray) -> int:
    x = np.frombuffer(bytes(a), dtype=np.uint8)
    y = np.frombuffer(bytes(b), dtype=np.uint8)
    return int(np.unpackbits(x & y).sum())


class CurvatureTally:
    """Distinct-set plus multiplicity count of curvatures in [1, X]."""

    def __init__(self, bound: int):
        self.bound = bound
        self.bits = bit_vector(bound)
        self.multiplicity = 0

    def add(self, value: int) -> None:
        if 1 <= value <= self.bound:
            self.bits[value >> 3] |= 1 << (value & 7)
            self.multiplicity += 1

    def __contains__(self, value: int) -> bool:
        if not 1 <= value <= self.bound:
            return False
        return bool(self.bits[value >> 3] & (1 << (value & 7)))

    @property
    def distinct(self) -> int:
        return popcount(self.bits)

    def members(self) -> np.ndarray:
        return bits_to_array(self.bits, self.bound)

    def merge(self, other: "CurvatureTally") -> None:
        if other.bound != self.bound:
            raise ValidationError("cannot merge tallies over different universes")
        or_bits(self.bits, other.bits)
        self.multiplicity += other.multiplicity

    def summary(self) -> dict:
        return {
            "X": self.bound,
            "kappa": self.distinct,
            "N": self.multiplicity,
            "ratio": f"{self.distinct / self.bound:.9f}",
        }
