"""Bit-packed vectors and matrices over GF(2).

A vector is backed by a single arbitrary-precision integer with coordinate j
stored in bit j, i.e. coordinate 0 is the least significant bit. Weight is one
popcount on the backing integer and addition is one XOR, which keeps distance
evaluations cheap inside the sampling and analysis inner loops.

The text serialization is a string of '0'/'1' characters with coordinate 0
first, so ``BitVector.from01("110")`` has weight 2 and ``v.to01()`` round-trips.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import DimensionError, ParameterError

__all__ = ["BitVector", "BitMatrix", "weight", "hamming_distance", "add", "encode"]


class BitVector:
    """Immutable length-n vector over GF(2).

    Instances are hashable and safe to share read-only across threads.
    """

    __slots__ = ("n", "_bits")

    def __init__(self, n: int, bits: int = 0):
        if n < 1:
            raise ParameterError(f"vector length must be >= 1, got {n}")
        if bits < 0 or bits >> n != 0:
            raise ParameterError(f"bit pattern does not fit length {n}")
        self.n = n
        self._bits = bits

    @classmethod
    def zeros(cls, n: int) -> "BitVector":
        return cls(n, 0)

    @classmethod
    def ones(cls, n: int) -> "BitVector":
        return cls(n, (1 << n) - 1)

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "BitVector":
        acc = 0
        n = 0
        for b in bits:
            if b not in (0, 1):
                raise ParameterError(f"coordinates must be 0 or 1, got {b!r}")
            acc |= b << n
            n += 1
        return cls(n, acc)

    @classmethod
    def from01(cls, text: str) -> "BitVector":
        if not text or set(text) - {"0", "1"}:
            raise ParameterError(f"expected a nonempty string of 0/1, got {text!r}")
        # coordinate 0 first: reversing gives the usual binary literal
        return cls(len(text), int(text[::-1], 2))

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "BitVector":
        a = np.asarray(arr).astype(np.uint8)
        if a.ndim != 1 or a.size < 1:
            raise ParameterError("expected a nonempty 1-D array")
        if np.any(a > 1):
            raise ParameterError("coordinates must be 0 or 1")
        packed = np.packbits(a, bitorder="little").tobytes()
        return cls(a.size, int.from_bytes(packed, "little"))

    @property
    def bits(self) -> int:
        """Backing integer; bit j is coordinate j."""
        return self._bits

    def weight(self) -> int:
        return self._bits.bit_count()

    def to01(self) -> str:
        return "".join("1" if (self._bits >> j) & 1 else "0" for j in range(self.n))

    def to_array(self) -> np.ndarray:
        raw = self._bits.to_bytes((self.n + 7) // 8, "little")
        return np.unpackbits(np.frombuffer(raw, np.uint8), bitorder="little")[: self.n]

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, j: int) -> int:
        if not 0 <= j < self.n:
            raise IndexError(j)
        return (self._bits >> j) & 1

    def __iter__(self) -> Iterator[int]:
        bits = self._bits
        for _ in range(self.n):
            yield bits & 1
            bits >>= 1

    def __xor__(self, other: "BitVector") -> "BitVector":
        if self.n != other.n:
            raise DimensionError(f"length mismatch: {self.n} vs {other.n}")
        return BitVector(self.n, self._bits ^ other._bits)

    def __and__(self, other: "BitVector") -> "BitVector":
        if self.n != other.n:
            raise DimensionError(f"length mismatch: {self.n} vs {other.n}")
        return BitVector(self.n, self._bits & other._bits)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitVector):
            return NotImplemented
        return self.n == other.n and self._bits == other._bits

    def __hash__(self) -> int:
        return hash((self.n, self._bits))

    def __repr__(self) -> str:
        body = self.to01() if self.n <= 64 else f"{self.to01()[:64]}...len={self.n}"
        return f"BitVector('{body}')"


def weight(v: BitVector) -> int:
    """Number of 1-coordinates of v."""
    return v.weight()


def hamming_distance(a: BitVector, b: BitVector) -> int:
    """Number of coordinates where a and b differ; requires equal lengths."""
    if a.n != b.n:
        raise DimensionError(f"length mismatch: {a.n} vs {b.n}")
    return (a.bits ^ b.bits).bit_count()


def add(a: BitVector, b: BitVector) -> BitVector:
    """Coordinatewise XOR (GF(2) addition)."""
    return a ^ b


class BitMatrix:
    """Immutable k x n matrix over GF(2), stored as a tuple of equal-length rows."""

    __slots__ = ("rows",)

    def __init__(self, rows: Sequence[BitVector]):
        rows = tuple(rows)
        if not rows:
            raise ParameterError("matrix needs at least one row")
        n = rows[0].n
        if any(r.n != n for r in rows):
            raise DimensionError("all rows must share the same length")
        self.rows = rows

    @property
    def k(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return self.rows[0].n

    def row_ints(self) -> list[int]:
        """Rows as backing integers, for the stepping kernels."""
        return [r.bits for r in self.rows]

    def encode(self, m: BitVector) -> BitVector:
        return encode(m, self)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        return f"BitMatrix(k={self.k}, n={self.n})"


def encode(m: BitVector, G: BitMatrix) -> BitVector:
    """GF(2) product m*G: the XOR of the rows g_i with m_i = 1."""
    if m.n != G.k:
        raise DimensionError(f"message length {m.n} != row count {G.k}")
    acc = 0
    sel = m.bits
    rows = G.rows
    while sel:
        low = sel & -sel
        acc ^= rows[low.bit_length() - 1].bits
        sel ^= low
    return BitVector(G.n, acc)
