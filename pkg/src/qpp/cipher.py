"""Word-by-word QPP encryption.

Bit strings are cut MSB-first into n-bit words (the last word zero-padded on
the right) and word ``i`` of a session goes through table ``i mod M``. The
session counter keeps running across calls, so two messages sent through
one session use different tables for the same position. Start a fresh
:class:`CipherSession` to restart at table 0.

Nothing here authenticates anything: a wrong pad decrypts to well-formed
garbage.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .bits import BitString, bits_to_words, words_to_bits
from .padgen import QuantumPermutationPad, invert_pad
from .permutation import OutOfRangeError, WordSizeError, check_word_size


class StreamLengthError(ValueError):
    """A word stream's declared bit length does not fit its word count."""


def words_needed(n: int, bit_length: int) -> int:
    return -(-bit_length // n)


@dataclass(frozen=True, eq=False)
class WordStream:
    n: int
    words: np.ndarray
    original_bit_length: int

    def __post_init__(self) -> None:
        check_word_size(self.n)
        words = np.asarray(self.words, dtype=np.int64).reshape(-1)
        if words.size and (words.min() < 0 or words.max() >= 1 << self.n):
            raise OutOfRangeError(f"stream contains a word that does not fit in {self.n} bits")
        count = words.size
        if self.original_bit_length < 0 or count != words_needed(self.n, self.original_bit_length):
            raise StreamLengthError(
                f"{count} words of {self.n} bits cannot carry exactly "
                f"{self.original_bit_length} bits"
            )
        frozen = words.astype(np.uint32)
        frozen.setflags(write=False)
        object.__setattr__(self, "words", frozen)

    def __len__(self) -> int:
        return int(self.words.size)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WordStream):
            return NotImplemented
        return (
            self.n == other.n
            and self.original_bit_length == other.original_bit_length
            and np.array_equal(self.words, other.words)
        )

    def __repr__(self) -> str:
        return (
            f"WordStream(n={self.n}, words={len(self)}, "
            f"original_bit_length={self.original_bit_length})"
        )


def pack_bits(n: int, bits: BitString) -> WordStream:
    n = check_word_size(n)
    flat = bits.to_array()
    pad = -len(flat) % n
    if pad:
        flat = np.concatenate([flat, np.zeros(pad, dtype=np.uint8)])
    return WordStream(n, bits_to_words(flat, n), bits.length)


def pack_bytes(n: int, data: bytes) -> WordStream:
    return pack_bits(n, BitString.from_bytes(data))


def unpack_bits(stream: WordStream) -> BitString:
    flat = words_to_bits(stream.words, stream.n)[: stream.original_bit_length]
    return BitString.from_array(flat)


def unpack_bytes(stream: WordStream) -> bytes:
    """Unpack a stream that encodes whole bytes."""
    if stream.original_bit_length % 8:
        raise StreamLengthError(
            f"stream carries {stream.original_bit_length} bits, not a whole number of bytes"
        )
    return unpack_bits(stream).data


def _check_word(pad: QuantumPermutationPad, value: int) -> int:
    if not 0 <= value < 1 << pad.n:
        raise OutOfRangeError(f"word {value} out of range for n={pad.n}")
    return value


def encrypt_word(pad: QuantumPermutationPad, index: int, m: int) -> int:
    return int(pad.tables[index % pad.M].map[_check_word(pad, m)])


def decrypt_word(pad: QuantumPermutationPad, index: int, c: int) -> int:
    """Invert the table at ``index mod M`` by search; use a session for bulk work."""
    table = pad.tables[index % pad.M].map
    return int(np.flatnonzero(table == _check_word(pad, c))[0])


@dataclass
class CipherSession:
    """A pad plus the absolute index of the next word to process.

    One session per direction: the sender encrypts through its session and
    the receiver decrypts through its own, each starting at word 0.
    """

    pad: QuantumPermutationPad
    word_counter: int = 0
    _inverse: QuantumPermutationPad | None = field(default=None, repr=False)

    @property
    def inverse_pad(self) -> QuantumPermutationPad:
        if self._inverse is None:
            self._inverse = invert_pad(self.pad)
        return self._inverse


def _transform(tables: np.ndarray, start: int, stream: WordStream) -> WordStream:
    count = len(stream)
    rows = (np.arange(count, dtype=np.int64) + start) % tables.shape[0]
    out = tables[rows, stream.words.astype(np.int64)]
    return WordStream(stream.n, out, stream.original_bit_length)


def _run(session: CipherSession, stream: WordStream, pad: QuantumPermutationPad) -> WordStream:
    if stream.n != pad.n:
        raise WordSizeError(f"stream word size {stream.n} does not match pad word size {pad.n}")
    out = _transform(pad.stacked(), session.word_counter, stream)
    session.word_counter += len(stream)
    return out


def encrypt_stream(session: CipherSession, stream: WordStream) -> WordStream:
    return _run(session, stream, session.pad)


def decrypt_stream(session: CipherSession, stream: WordStream) -> WordStream:
    return _run(session, stream, session.inverse_pad)


def encrypt_bits(pad: QuantumPermutationPad, bits: BitString) -> WordStream:
    """One-shot encryption of a whole message starting at word 0."""
    return encrypt_stream(CipherSession(pad), pack_bits(pad.n, bits))


def decrypt_bits(pad: QuantumPermutationPad, stream: WordStream) -> BitString:
    return unpack_bits(decrypt_stream(CipherSession(pad), stream))


def otp_encrypt(n: int, key_words: Sequence[int], words: Sequence[int]) -> list[int]:
    """Classical one-time pad over n-bit words: c[i] = k[i] XOR m[i]."""
    n = check_word_size(n)
    key = np.asarray(key_words, dtype=np.int64).reshape(-1)
    msg = np.asarray(words, dtype=np.int64).reshape(-1)
    if key.size < msg.size:
        raise ValueError(f"one-time pad key has {key.size} words, message has {msg.size}")
    key = key[: msg.size]
    for name, arr in (("key", key), ("message", msg)):
        if arr.size and (arr.min() < 0 or arr.max() >= 1 << n):
            raise OutOfRangeError(f"{name} word out of range for n={n}")
    return (key ^ msg).tolist()
