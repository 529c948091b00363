"""Bit-vector representation, seeded random streams, and mutation operators.

Bit strings are stored as plain Python integers (bit i of the integer is
position i+1 of the string) with a cached ones-count, so fitness evaluation
and mutation deltas are O(1) word operations.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

_BLOCK = 4096


class BitString:
    """Fixed-length binary vector.

    The length is fixed at construction; every element is exactly 0 or 1.
    Position 1 of the string is bit 0 of ``value``.
    """

    __slots__ = ("n", "value", "ones")

    def __init__(self, n: int, value: int = 0, ones: int | None = None):
        if n < 1:
            raise ValueError(f"dimension must be >= 1, got {n}")
        if value < 0 or value >> n:
            raise ValueError(f"value {value} does not fit in {n} bits")
        self.n = n
        self.value = value
        self.ones = value.bit_count() if ones is None else ones

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "BitString":
        bits = list(bits)
        if any(b not in (0, 1) for b in bits):
            raise ValueError("bits must be 0 or 1")
        value = 0
        for i, b in enumerate(bits):
            value |= b << i
        return cls(len(bits), value)

    @property
    def bits(self) -> list[int]:
        return [(self.value >> i) & 1 for i in range(self.n)]

    @property
    def first_bit(self) -> int:
        return self.value & 1

    def all_ones(self) -> bool:
        return self.ones == self.n

    def flipped(self, mask: int) -> "BitString":
        """Fresh string with the bits selected by ``mask`` flipped."""
        new = self.value ^ mask
        return BitString(self.n, new, self.ones + (new.bit_count() - self.value.bit_count()))

    def flipped_bit(self, pos: int) -> "BitString":
        bit = 1 << pos
        delta = -1 if self.value & bit else 1
        return BitString(self.n, self.value ^ bit, self.ones + delta)

    def hamming(self, other: "BitString") -> int:
        return (self.value ^ other.value).bit_count()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitString)
            and self.n == other.n
            and self.value == other.value
        )

    def __hash__(self) -> int:
        return hash((self.n, self.value))

    def __repr__(self) -> str:
        return f"BitString('{''.join(str(b) for b in self.bits)}')"


class RandomStream:
    """Counter-based random stream keyed by (seed, stream index).

    Identical (seed, stream) pairs replay the identical draw sequence;
    distinct stream indices give statistically independent streams, so
    parallel trials never share state.  Backed by numpy's Philox generator,
    whose 128-bit key holds the two identifiers directly.
    """

    def __init__(self, seed: int, stream: int = 0):
        self.seed = int(seed) & 0xFFFFFFFFFFFFFFFF
        self.stream = int(stream) & 0xFFFFFFFFFFFFFFFF
        self.generator = np.random.Generator(
            np.random.Philox(key=np.array([self.seed, self.stream], dtype=np.uint64))
        )
        # block caches for hot loops: {n: (array, cursor)}
        self._index_blocks: dict[int, tuple[np.ndarray, int]] = {}
        self._flip_blocks: dict[tuple[int, float], tuple[np.ndarray, int]] = {}

    def random_bits(self, n: int) -> int:
        """Uniform n-bit integer."""
        nbytes = (n + 7) // 8
        raw = int.from_bytes(self.generator.bytes(nbytes), "little")
        return raw & ((1 << n) - 1)

    def next_index(self, n: int) -> int:
        """Uniform integer in [0, n), drawn from a refillable block."""
        block, cursor = self._index_blocks.get(n, (None, 0))
        if block is None or cursor >= len(block):
            block = self.generator.integers(0, n, size=_BLOCK)
            cursor = 0
        self._index_blocks[n] = (block, cursor + 1)
        return int(block[cursor])

    def next_flip_count(self, n: int, rate: float) -> int:
        """Binomial(n, rate) draw, blocked for speed."""
        key = (n, rate)
        block, cursor = self._flip_blocks.get(key, (None, 0))
        if block is None or cursor >= len(block):
            block = self.generator.binomial(n, rate, size=_BLOCK)
            cursor = 0
        self._flip_blocks[key] = (block, cursor + 1)
        return int(block[cursor])

    def distinct_indices(self, n: int, m: int) -> Sequence[int]:
        """m distinct uniform positions in [0, n)."""
        if m == 1:
            return (self.next_index(n),)
        if m == 2:
            a = self.next_index(n)
            b = self.next_index(n)
            while b == a:
                b = self.next_index(n)
            return (a, b)
        return self.generator.choice(n, size=m, replace=False)


def uniform_random_bitstring(n: int, rng: RandomStream) -> BitString:
    """Each bit independently 0 or 1 with probability 1/2."""
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    return BitString(n, rng.random_bits(n))


def mutate_value_one_bit(value: int, ones: int, n: int, rng: RandomStream) -> tuple[int, int]:
    """One-bit mutation on the raw (value, ones) representation."""
    bit = 1 << rng.next_index(n)
    return value ^ bit, ones + (-1 if value & bit else 1)


def mutate_value_bitwise(
    value: int, ones: int, n: int, rng: RandomStream, rate: float | None = None
) -> tuple[int, int]:
    """Bitwise mutation on the raw (value, ones) representation.

    The flip count is Binomial(n, rate) with the flipped positions a uniform
    subset of that size, which is distribution-identical to per-bit flips.
    """
    if rate is None:
        rate = 1.0 / n
    m = rng.next_flip_count(n, rate)
    if m == 0:
        return value, ones
    mask = 0
    for pos in rng.distinct_indices(n, m):
        mask |= 1 << int(pos)
    new = value ^ mask
    return new, ones + (new.bit_count() - value.bit_count())


def one_bit_mutation(x: BitString, rng: RandomStream) -> BitString:
    """Flip one uniformly chosen bit; the result always has Hamming distance 1."""
    value, ones = mutate_value_one_bit(x.value, x.ones, x.n, rng)
    return BitString(x.n, value, ones)


def bitwise_mutation(x: BitString, rng: RandomStream, rate: float | None = None) -> BitString:
    """Independently flip each bit with probability ``rate`` (default 1/n).

    May return a copy equal to ``x``.
    """
    value, ones = mutate_value_bitwise(x.value, x.ones, x.n, rng, rate)
    return BitString(x.n, value, ones)
