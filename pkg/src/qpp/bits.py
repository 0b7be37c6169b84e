"""Bit strings and MSB-first bit reading."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class BitString:
    """An exact-length bit string.

    ``data`` holds the bits MSB-first; any bits past ``length`` in the last
    byte are zero.
    """

    data: bytes
    length: int

    def __post_init__(self) -> None:
        if self.length < 0:
            raise ValueError(f"negative bit length {self.length}")
        if len(self.data) != (self.length + 7) // 8:
            raise ValueError(
                f"{len(self.data)} bytes cannot hold exactly {self.length} bits"
            )
        tail = self.length % 8
        if tail and self.data[-1] & ((1 << (8 - tail)) - 1):
            raise ValueError("bits past the declared length must be zero")

    @classmethod
    def from_bytes(cls, data: bytes) -> BitString:
        return cls(bytes(data), 8 * len(data))

    @classmethod
    def from_str(cls, text: str) -> BitString:
        """Parse a string of '0'/'1' characters (underscores and spaces ignored)."""
        digits = text.replace("_", "").replace(" ", "")
        if set(digits) - {"0", "1"}:
            raise ValueError(f"not a bit string: {text!r}")
        return cls.from_array(np.frombuffer(digits.encode(), dtype=np.uint8) - ord("0"))

    @classmethod
    def from_array(cls, bits: np.ndarray) -> BitString:
        bits = np.asarray(bits, dtype=np.uint8)
        return cls(np.packbits(bits).tobytes(), int(bits.size))

    def to_array(self) -> np.ndarray:
        """One uint8 per bit."""
        return np.unpackbits(np.frombuffer(self.data, dtype=np.uint8), count=self.length)

    def __str__(self) -> str:
        return "".join("1" if b else "0" for b in self.to_array())

    def __len__(self) -> int:
        return self.length


def read_bits(data: bytes, offset: int, width: int) -> int:
    """Read ``width`` bits starting at bit ``offset`` as an unsigned int, MSB-first."""
    if width == 0:
        return 0
    first = offset // 8
    last = (offset + width - 1) // 8
    chunk = int.from_bytes(data[first : last + 1], "big")
    drop = (last + 1) * 8 - (offset + width)
    return (chunk >> drop) & ((1 << width) - 1)


def words_to_bits(words: np.ndarray, n: int) -> np.ndarray:
    """Expand each n-bit word into n bits, MSB-first, as a flat uint8 array."""
    words = np.asarray(words, dtype=np.uint32)
    shifts = np.arange(n - 1, -1, -1, dtype=np.uint32)
    return ((words[:, None] >> shifts) & 1).astype(np.uint8).reshape(-1)


def bits_to_words(bits: np.ndarray, n: int) -> np.ndarray:
    """Group a flat bit array (length a multiple of n) into n-bit words, MSB-first."""
    bits = np.asarray(bits, dtype=np.uint32).reshape(-1, n)
    weights = np.uint32(1) << np.arange(n - 1, -1, -1, dtype=np.uint32)
    return (bits * weights).sum(axis=1, dtype=np.uint32)
