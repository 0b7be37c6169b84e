"""Deriving permutation tables and pads from pre-shared key bits.

Three shuffles are available:

* ``PAPER``: the pseudo-code as published. Each swap partner ``j`` is a full
  n-bit key word, so ``j`` ranges over all of ``[0, 2**n - 1]`` rather than
  ``[0, i]``. This is the well-known naive shuffle and is biased; it is kept
  as the default because it is the construction being reproduced.
* ``UNBIASED``: textbook Fisher-Yates with rejection sampling.
* ``RC4``: the RC4 key schedule generalized to modulus 2**n.

Key bits are read MSB-first, n bits per key word, words in index order.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .bits import BitString, bits_to_words, read_bits, words_to_bits
from .permutation import PermutationTable, _table, check_word_size, invert


class Generator(enum.IntEnum):
    PAPER = 0
    UNBIASED = 1
    RC4 = 2

    @classmethod
    def parse(cls, value: str | int | Generator) -> Generator:
        if isinstance(value, str):
            try:
                return cls[value.upper().replace("-", "_")]
            except KeyError:
                raise ValueError(f"unknown generator {value!r}") from None
        return cls(value)


class InsufficientKeyError(ValueError):
    """Key material ran out.

    ``required`` and ``available`` are in bits; ``table_index`` is set when the
    failure happened while building a pad.
    """

    def __init__(
        self,
        required: int,
        available: int,
        consumed: int | None = None,
        table_index: int | None = None,
    ):
        self.required = required
        self.available = available
        self.consumed = consumed
        self.table_index = table_index
        msg = f"required {required} bits, available {available}"
        if consumed is not None:
            msg += f" ({consumed} bits consumed before running out)"
        if table_index is not None:
            msg = f"table {table_index}: {msg}"
        super().__init__(msg)


class KeyMaterial:
    """A finite stream of pre-shared key bits, consumed front to back exactly once."""

    def __init__(self, bits: BitString):
        self._data = bits.data
        self._length = bits.length
        self._cursor = 0

    @classmethod
    def from_bytes(cls, data: bytes) -> KeyMaterial:
        return cls(BitString.from_bytes(data))

    @classmethod
    def from_words(cls, n: int, words) -> KeyMaterial:
        """Encode n-bit words MSB-first (handy for building test keys)."""
        words = np.asarray(words, dtype=np.int64)
        if words.size and (words.min() < 0 or words.max() >= 1 << n):
            raise ValueError(f"key words must fit in {n} bits")
        return cls(BitString.from_array(words_to_bits(words, n)))

    @classmethod
    def zeros(cls, nbits: int) -> KeyMaterial:
        return cls(BitString(bytes((nbits + 7) // 8), nbits))

    @property
    def length(self) -> int:
        return self._length

    @property
    def consumed(self) -> int:
        return self._cursor

    @property
    def remaining(self) -> int:
        return self._length - self._cursor

    def require(self, nbits: int, table_index: int | None = None) -> None:
        if nbits > self.remaining:
            raise InsufficientKeyError(nbits, self.remaining, table_index=table_index)

    def read(self, width: int) -> int:
        """Consume ``width`` bits and return them as an unsigned int."""
        if width > self.remaining:
            raise InsufficientKeyError(width, self.remaining, consumed=self._cursor)
        value = read_bits(self._data, self._cursor, width)
        self._cursor += width
        return value

    def read_words(self, n: int, count: int) -> np.ndarray:
        """Consume ``count`` n-bit words."""
        nbits = n * count
        self.require(nbits)
        start = self._cursor
        chunk = np.frombuffer(self._data[start // 8 : (start + nbits + 7) // 8], dtype=np.uint8)
        bits = np.unpackbits(chunk)[start % 8 : start % 8 + nbits]
        self._cursor += nbits
        return bits_to_words(bits, n)

    def __repr__(self) -> str:
        return f"KeyMaterial(length={self._length}, consumed={self._cursor})"


def required_key_bits(n: int, M: int) -> int:
    """Key bits needed for a pad of M tables over n-bit words: M * n * 2**n."""
    n = check_word_size(n)
    if not isinstance(M, (int, np.integer)) or M < 1:
        raise ValueError(f"pad length M must be a positive integer, got {M!r}")
    if M > 0xFFFF:
        # Pad files store M in two bytes.
        raise OverflowError(f"pad length {M} exceeds the supported maximum 65535")
    return int(M) * n * (1 << n)


def shuffle_paper(n: int, key: KeyMaterial) -> PermutationTable:
    """The published shuffle, verbatim.

    Reads 2**n key words k[0..2**n-1] (k[0] is charged but never used), then
    for i = 2**n-1 down to 1 swaps S[k[i]] and S[i].
    """
    n = check_word_size(n)
    size = 1 << n
    k = key.read_words(n, size).tolist()
    S = list(range(size))
    for i in range(size - 1, 0, -1):
        j = k[i]
        S[j], S[i] = S[i], S[j]
    return _table(n, np.array(S, dtype=np.uint32))


def shuffle_unbiased(n: int, key: KeyMaterial) -> PermutationTable:
    """Fisher-Yates: for i = 2**n-1 down to 1, swap S[i] with S[j], j uniform on [0, i].

    Each j is drawn from ceil(log2(i+1)) key bits, redrawing when the value
    exceeds i, so key consumption varies.
    """
    n = check_word_size(n)
    size = 1 << n
    S = list(range(size))
    for i in range(size - 1, 0, -1):
        width = i.bit_length()  # == ceil(log2(i + 1))
        j = key.read(width)
        while j > i:
            j = key.read(width)
        S[j], S[i] = S[i], S[j]
    return _table(n, np.array(S, dtype=np.uint32))


def shuffle_rc4ksa(n: int, key: KeyMaterial) -> PermutationTable:
    """Single-pass RC4 key schedule over 2**n states with 2**n key words of n bits."""
    n = check_word_size(n)
    size = 1 << n
    mask = size - 1
    k = key.read_words(n, size).tolist()
    S = list(range(size))
    j = 0
    for i in range(size):
        j = (j + S[i] + k[i]) & mask
        S[i], S[j] = S[j], S[i]
    return _table(n, np.array(S, dtype=np.uint32))


SHUFFLES = {
    Generator.PAPER: shuffle_paper,
    Generator.UNBIASED: shuffle_unbiased,
    Generator.RC4: shuffle_rc4ksa,
}


@dataclass(frozen=True, eq=False)
class QuantumPermutationPad:
    """M permutation tables over n-bit words; word i is handled by table i mod M."""

    n: int
    tables: tuple[PermutationTable, ...]
    generator: Generator = Generator.PAPER

    def __post_init__(self) -> None:
        check_word_size(self.n)
        if not self.tables:
            raise ValueError("a pad needs at least one table")
        for idx, table in enumerate(self.tables):
            if table.n != self.n:
                raise ValueError(f"table {idx} has word size {table.n}, pad has {self.n}")

    @property
    def M(self) -> int:
        return len(self.tables)

    def stacked(self) -> np.ndarray:
        """All tables as an (M, 2**n) array."""
        cached = self.__dict__.get("_stacked")
        if cached is None:
            cached = np.stack([t.map for t in self.tables])
            cached.setflags(write=False)
            object.__setattr__(self, "_stacked", cached)
        return cached

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QuantumPermutationPad):
            return NotImplemented
        return (
            self.n == other.n
            and self.generator == other.generator
            and self.tables == other.tables
        )

    def __hash__(self) -> int:
        return hash((self.n, self.generator, self.tables))

    def __repr__(self) -> str:
        return f"QuantumPermutationPad(n={self.n}, M={self.M}, generator={self.generator.name})"


def generate_pad(
    n: int, M: int, generator: Generator | str | int, key: KeyMaterial
) -> QuantumPermutationPad:
    """Run the chosen shuffle M times on successive key segments."""
    generator = Generator.parse(generator)
    required_key_bits(n, M)
    shuffle = SHUFFLES[generator]
    tables = []
    for idx in range(M):
        if generator is not Generator.UNBIASED:
            key.require(n << n, table_index=idx)
        try:
            tables.append(shuffle(n, key))
        except InsufficientKeyError as exc:
            # Rejection sampling has no fixed budget; report where it stopped.
            raise InsufficientKeyError(
                exc.required, exc.available, consumed=key.consumed, table_index=idx
            ) from None
    return QuantumPermutationPad(n, tuple(tables), generator)


def invert_pad(pad: QuantumPermutationPad) -> QuantumPermutationPad:
    return QuantumPermutationPad(pad.n, tuple(invert(t) for t in pad.tables), pad.generator)
