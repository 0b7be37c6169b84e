"""Permutations of n-bit words.

A :class:`PermutationTable` stores a bijection on ``{0, ..., 2**n - 1}`` as a
mapping array: word ``i`` encrypts to ``map[i]``. The dense matrix view puts a
1 at row ``i``, column ``map[i]``, so reading the matrix row by row gives the
ciphertext of each plaintext word.

Composition is written ``compose(outer, inner)`` and applies ``inner`` first.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

MIN_WORD_BITS = 1
MAX_WORD_BITS = 16
MAX_DENSE_BITS = 10


class PermutationError(ValueError):
    """Base class for invalid permutation input."""


class WordSizeError(PermutationError):
    pass


class WrongLengthError(PermutationError):
    pass


class OutOfRangeError(PermutationError):
    pass


class DuplicateValueError(PermutationError):
    pass


def check_word_size(n: int) -> int:
    if not isinstance(n, (int, np.integer)) or not MIN_WORD_BITS <= n <= MAX_WORD_BITS:
        raise WordSizeError(
            f"word size must be an integer in [{MIN_WORD_BITS}, {MAX_WORD_BITS}], got {n!r}"
        )
    return int(n)


def _check_word(n: int, value: int, what: str = "word") -> int:
    if not 0 <= value < (1 << n):
        raise OutOfRangeError(f"{what} {value} out of range for n={n}")
    return int(value)


def _frozen(values: np.ndarray) -> np.ndarray:
    values.setflags(write=False)
    return values


@dataclass(frozen=True, eq=False)
class PermutationTable:
    """An immutable bijection on n-bit words.

    Build instances with :func:`identity`, :func:`from_mapping` or
    :func:`from_xor_key`; the constructor itself does not validate.
    """

    n: int
    map: np.ndarray

    @property
    def size(self) -> int:
        return 1 << self.n

    def __call__(self, m: int) -> int:
        return apply(self, m)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PermutationTable):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.map, other.map)

    def __hash__(self) -> int:
        return hash((self.n, self.map.tobytes()))

    def __repr__(self) -> str:
        if self.n <= 4:
            return f"PermutationTable(n={self.n}, map={self.tolist()})"
        return f"PermutationTable(n={self.n}, map=[{self.map[0]}, {self.map[1]}, ...])"

    def tolist(self) -> list[int]:
        return [int(v) for v in self.map]


@dataclass(frozen=True, eq=False)
class DenseMatrix:
    """The 2^n x 2^n binary matrix of a permutation (row i has its 1 at column map[i])."""

    n: int
    bits: np.ndarray

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DenseMatrix):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.bits, other.bits)

    def __hash__(self) -> int:
        return hash((self.n, self.bits.tobytes()))

    def rows(self) -> list[list[int]]:
        return self.bits.astype(int).tolist()


def _table(n: int, values: np.ndarray) -> PermutationTable:
    return PermutationTable(n, _frozen(values.astype(np.uint32, copy=False)))


def identity(n: int) -> PermutationTable:
    n = check_word_size(n)
    return _table(n, np.arange(1 << n, dtype=np.uint32))


def from_mapping(n: int, entries: Sequence[int] | np.ndarray) -> PermutationTable:
    """Validated constructor.

    Raises:
        WrongLengthError: ``entries`` does not have exactly 2**n items.
        OutOfRangeError: some entry is negative or >= 2**n.
        DuplicateValueError: some value appears twice.
    """
    n = check_word_size(n)
    size = 1 << n
    values = np.array(entries, dtype=np.int64).reshape(-1)
    if values.size != size:
        raise WrongLengthError(f"expected {size} entries for n={n}, got {values.size}")
    bad = (values < 0) | (values >= size)
    if bad.any():
        pos = int(np.argmax(bad))
        raise OutOfRangeError(
            f"entry {int(values[pos])} at index {pos} out of range [0, {size - 1}]"
        )
    counts = np.bincount(values, minlength=size)
    if (counts != 1).any():
        dup = int(np.argmax(counts > 1))
        raise DuplicateValueError(f"duplicate value {dup} ({int(counts[dup])} occurrences)")
    return _table(n, values)


def from_xor_key(n: int, k: int) -> PermutationTable:
    """The table m -> m XOR k, i.e. one-time-pad encryption with key word k."""
    n = check_word_size(n)
    k = _check_word(n, k, "xor key")
    return _table(n, np.arange(1 << n, dtype=np.uint32) ^ np.uint32(k))


def apply(P: PermutationTable, m: int) -> int:
    return int(P.map[_check_word(P.n, m)])


def invert(P: PermutationTable) -> PermutationTable:
    inverse = np.empty_like(P.map)
    inverse[P.map] = np.arange(P.size, dtype=np.uint32)
    return _table(P.n, inverse)


def _check_same_size(P: PermutationTable, Q: PermutationTable) -> None:
    if P.n != Q.n:
        raise WordSizeError(f"word size mismatch: {P.n} vs {Q.n}")


def compose(outer: PermutationTable, inner: PermutationTable) -> PermutationTable:
    """Return R with R[m] = outer[inner[m]]; ``inner`` acts first."""
    _check_same_size(outer, inner)
    return _table(outer.n, outer.map[inner.map])


def commutes_with(P: PermutationTable, Q: PermutationTable) -> bool:
    _check_same_size(P, Q)
    return bool(np.array_equal(P.map[Q.map], Q.map[P.map]))


def is_involution(P: PermutationTable) -> bool:
    return bool(np.array_equal(P.map[P.map], np.arange(P.size)))


def to_dense_matrix(P: PermutationTable) -> DenseMatrix:
    if P.n > MAX_DENSE_BITS:
        raise WordSizeError(
            f"dense matrices are limited to n <= {MAX_DENSE_BITS}, got n={P.n}"
        )
    bits = np.zeros((P.size, P.size), dtype=np.uint8)
    bits[np.arange(P.size), P.map] = 1
    return DenseMatrix(P.n, _frozen(bits))


def from_dense_matrix(D: DenseMatrix) -> PermutationTable:
    bits = np.asarray(D.bits)
    size = 1 << D.n
    if bits.shape != (size, size) or not np.isin(bits, (0, 1)).all():
        raise PermutationError("not a 0/1 matrix of the right shape")
    if (bits.sum(axis=0) != 1).any() or (bits.sum(axis=1) != 1).any():
        raise PermutationError("matrix needs exactly one 1 per row and column")
    return from_mapping(D.n, bits.argmax(axis=1))
