"""Bitstring genotypes, seeded randomness, and the shared variation operators."""

from __future__ import annotations

import hashlib
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "BitString",
    "RandomSource",
    "random_bitstring",
    "sample_binomial",
    "flip_exact",
    "flip_exact_batch",
    "biased_crossover",
    "hamming_distance",
]

_SEED_BITS = 64


class RandomSource:
    """A seeded random stream; named substreams are statistically independent.

    Wraps numpy's PCG64 seeded through a SeedSequence so that the same seed
    always reproduces the same draw sequence, and substreams derived via
    :meth:`stream` never overlap with the parent or with each other.
    """

    __slots__ = ("seed", "_key", "generator")

    def __init__(self, seed: int, _key: tuple[int, ...] = ()):
        seed = int(seed)
        if not 0 <= seed < 2**_SEED_BITS:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
        self.seed = seed
        self._key = _key
        sequence = np.random.SeedSequence(entropy=seed, spawn_key=_key)
        self.generator = np.random.Generator(np.random.PCG64(sequence))

    def stream(self, name: str) -> "RandomSource":
        """Derive an independent substream keyed by a stable hash of `name`."""
        digest = hashlib.sha256(name.encode("utf-8")).digest()
        words = (
            int.from_bytes(digest[0:4], "big"),
            int.from_bytes(digest[4:8], "big"),
        )
        return RandomSource(self.seed, self._key + words)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"RandomSource(seed={self.seed}, key={self._key})"


class BitString:
    """Immutable fixed-length sequence of 0/1 values."""

    __slots__ = ("_bits",)

    def __init__(self, bits: Sequence[int] | Iterable[int] | np.ndarray):
        source = np.asarray(list(bits) if not isinstance(bits, np.ndarray) else bits)
        if source.ndim != 1:
            raise ValueError("bits must be one-dimensional")
        if source.size == 0:
            raise ValueError("a BitString must have length >= 1")
        if not np.isin(source, (0, 1)).all():
            raise ValueError("every position must be exactly 0 or 1")
        arr = source.astype(np.uint8)  # astype copies, so the input stays untouched
        arr.setflags(write=False)
        self._bits = arr

    @classmethod
    def _from_trusted(cls, arr: np.ndarray) -> "BitString":
        # internal fast path: `arr` is a fresh 1-D uint8 array of 0/1 values
        obj = object.__new__(cls)
        arr.setflags(write=False)
        obj._bits = arr
        return obj

    @classmethod
    def from01(cls, text: str) -> "BitString":
        """Build from a literal like "0101"."""
        return cls(np.frombuffer(text.encode("ascii"), dtype=np.uint8) - ord("0"))

    @property
    def bits(self) -> np.ndarray:
        """Read-only uint8 view of the positions."""
        return self._bits

    @property
    def n(self) -> int:
        return self._bits.size

    def ones(self) -> int:
        return int(self._bits.sum())

    def to01(self) -> str:
        return "".join("1" if b else "0" for b in self._bits)

    def __len__(self) -> int:
        return self._bits.size

    def __getitem__(self, i: int) -> int:
        return int(self._bits[i])

    def __iter__(self):
        return iter(int(b) for b in self._bits)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitString):
            return NotImplemented
        return self._bits.size == other._bits.size and bool(
            np.array_equal(self._bits, other._bits)
        )

    __hash__ = None  # value equality without hashing; archives key on objectives

    def __repr__(self) -> str:
        text = self.to01()
        if len(text) > 32:
            text = text[:29] + "..."
        return f"BitString('{text}')"


def random_bitstring(n: int, rng: RandomSource) -> BitString:
    """Uniform random bitstring: each position is 0 or 1 with probability 1/2."""
    if n < 1:
        raise ValueError(f"length must be >= 1, got {n}")
    arr = rng.generator.integers(0, 2, size=n, dtype=np.uint8)
    return BitString._from_trusted(arr)


def sample_binomial(n: int, p: float, rng: RandomSource) -> int:
    """One draw from Bin(n, p)."""
    if n < 0:
        raise ValueError(f"trial count must be >= 0, got {n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability must lie in [0, 1], got {p}")
    return int(rng.generator.binomial(n, p))


def _exact_flip_rows(bits: np.ndarray, flips: int, count: int, gen: np.random.Generator) -> np.ndarray:
    """`count` copies of `bits`, each with an independent uniform `flips`-subset flipped."""
    out = np.repeat(bits[None, :], count, axis=0)
    if flips == 0:
        return out
    n = bits.size
    if flips == n:
        out ^= 1
        return out
    # positions of the `flips` smallest i.i.d. uniforms form a uniform subset
    uniforms = gen.random((count, n))
    idx = np.argpartition(uniforms, flips - 1, axis=1)[:, :flips]
    out[np.arange(count)[:, None], idx] ^= 1
    return out


def _crossover_rows(
    parent: np.ndarray, winner: np.ndarray, c: float, count: int, gen: np.random.Generator
) -> np.ndarray:
    """`count` offspring rows taking each bit from `winner` with probability `c`."""
    take = gen.random((count, parent.size)) < c
    return np.where(take, winner, parent)


def flip_exact(x: BitString, flips: int, rng: RandomSource) -> BitString:
    """Flip a uniformly random set of exactly `flips` distinct positions of `x`."""
    if not 0 <= flips <= x.n:
        raise ValueError(f"flip count must lie in [0, {x.n}], got {flips}")
    row = _exact_flip_rows(x.bits, flips, 1, rng.generator)[0]
    return BitString._from_trusted(np.ascontiguousarray(row))


def flip_exact_batch(x: BitString, flips: int, count: int, rng: RandomSource) -> list[BitString]:
    """`count` independent exact-`flips` mutants of `x`."""
    if not 0 <= flips <= x.n:
        raise ValueError(f"flip count must lie in [0, {x.n}], got {flips}")
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    rows = _exact_flip_rows(x.bits, flips, count, rng.generator)
    return [BitString._from_trusted(row.copy()) for row in rows]


def biased_crossover(
    x: BitString, x_winner: BitString, c: float, count: int, rng: RandomSource
) -> list[BitString]:
    """`count` offspring, each bit taken from `x_winner` with probability `c`, else from `x`.

    Offspring are mutually independent.
    """
    if x.n != x_winner.n:
        raise ValueError(f"length mismatch: {x.n} vs {x_winner.n}")
    if not 0.0 <= c <= 1.0:
        raise ValueError(f"crossover bias must lie in [0, 1], got {c}")
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    rows = _crossover_rows(x.bits, x_winner.bits, c, count, rng.generator)
    return [BitString._from_trusted(row.copy()) for row in rows]


def hamming_distance(x: BitString, y: BitString) -> int:
    if x.n != y.n:
        raise ValueError(f"length mismatch: {x.n} vs {y.n}")
    return int(np.count_nonzero(x.bits != y.bits))
