"""On-disk formats for pads and ciphertext.

Pad file (all integers little-endian)::

    offset  size  field
    0       4     magic b"QPP1"
    4       1     version (1)
    5       1     n, word size in bits (1..16)
    6       2     M, number of tables (>= 1)
    8       1     generator id (0 paper, 1 unbiased, 2 rc4)
    9       3     reserved, zero
    12      ...   M tables, each 2**n entries of 2 bytes

Ciphertext container::

    0       4     magic b"QPPC"
    4       1     version (1)
    5       1     n
    6       8     original bit length
    14      ...   ceil(words * n / 8) payload bytes, words packed MSB-first

Pad files are stored in the clear. They are the shared secret; protecting
them at rest is up to whoever holds them.
"""

from __future__ import annotations

import io
import struct
from typing import BinaryIO

import numpy as np

from .bits import bits_to_words, words_to_bits
from .cipher import WordStream, words_needed
from .padgen import Generator, QuantumPermutationPad
from .permutation import MAX_WORD_BITS, MIN_WORD_BITS, PermutationError, from_mapping

PAD_MAGIC = b"QPP1"
CONTAINER_MAGIC = b"QPPC"
VERSION = 1

PAD_HEADER = struct.Struct("<4sBBHB3s")
CONTAINER_HEADER = struct.Struct("<4sBBQ")


class FormatError(ValueError):
    """Base class for malformed pad or container files."""


class BadMagicError(FormatError):
    pass


class UnsupportedVersionError(FormatError):
    pass


class TruncatedError(FormatError):
    pass


class HeaderFieldError(FormatError):
    pass


class CorruptTableError(FormatError):
    def __init__(self, index: int, reason: str):
        self.index = index
        super().__init__(f"table {index} is not a permutation: {reason}")


class LengthConsistencyError(FormatError):
    pass


def _read_exact(source: BinaryIO, size: int, what: str) -> bytes:
    data = source.read(size)
    if len(data) != size:
        raise TruncatedError(f"truncated {what}: expected {size} bytes, got {len(data)}")
    return data


def _check_n(n: int) -> None:
    if not MIN_WORD_BITS <= n <= MAX_WORD_BITS:
        raise HeaderFieldError(f"word size {n} outside [{MIN_WORD_BITS}, {MAX_WORD_BITS}]")


def pad_file_size(n: int, M: int) -> int:
    return PAD_HEADER.size + M * (1 << n) * 2


def write_pad(pad: QuantumPermutationPad, sink: BinaryIO) -> int:
    header = PAD_HEADER.pack(PAD_MAGIC, VERSION, pad.n, pad.M, int(pad.generator), bytes(3))
    body = pad.stacked().astype("<u2").tobytes()
    sink.write(header)
    sink.write(body)
    return len(header) + len(body)


def read_pad(source: BinaryIO) -> QuantumPermutationPad:
    magic, version, n, M, gen_id, reserved = PAD_HEADER.unpack(
        _read_exact(source, PAD_HEADER.size, "pad header")
    )
    if magic != PAD_MAGIC:
        raise BadMagicError(f"not a pad file (magic {magic!r})")
    if version != VERSION:
        raise UnsupportedVersionError(f"unsupported pad file version {version}")
    _check_n(n)
    if M < 1:
        raise HeaderFieldError("pad file declares zero tables")
    try:
        generator = Generator(gen_id)
    except ValueError:
        raise HeaderFieldError(f"unknown generator id {gen_id}") from None
    if reserved != bytes(3):
        raise HeaderFieldError("reserved header bytes are not zero")
    size = 1 << n
    tables = []
    for idx in range(M):
        raw = _read_exact(source, size * 2, f"table {idx}")
        try:
            tables.append(from_mapping(n, np.frombuffer(raw, dtype="<u2")))
        except PermutationError as exc:
            raise CorruptTableError(idx, str(exc)) from None
    if source.read(1):
        raise LengthConsistencyError("trailing bytes after the last table")
    return QuantumPermutationPad(n, tuple(tables), generator)


def write_container(stream: WordStream, sink: BinaryIO) -> int:
    header = CONTAINER_HEADER.pack(CONTAINER_MAGIC, VERSION, stream.n, stream.original_bit_length)
    payload = np.packbits(words_to_bits(stream.words, stream.n)).tobytes()
    sink.write(header)
    sink.write(payload)
    return len(header) + len(payload)


def read_container(source: BinaryIO) -> WordStream:
    magic, version, n, bit_length = CONTAINER_HEADER.unpack(
        _read_exact(source, CONTAINER_HEADER.size, "container header")
    )
    if magic != CONTAINER_MAGIC:
        raise BadMagicError(f"not a ciphertext container (magic {magic!r})")
    if version != VERSION:
        raise UnsupportedVersionError(f"unsupported container version {version}")
    _check_n(n)
    count = words_needed(n, bit_length)
    expected = (count * n + 7) // 8
    payload = source.read()
    if len(payload) != expected:
        raise LengthConsistencyError(
            f"declared {bit_length} bits need {expected} payload bytes, found {len(payload)}"
        )
    bits = np.unpackbits(np.frombuffer(payload, dtype=np.uint8))[: count * n]
    return WordStream(n, bits_to_words(bits, n), bit_length)


def dump_pad(pad: QuantumPermutationPad) -> bytes:
    buf = io.BytesIO()
    write_pad(pad, buf)
    return buf.getvalue()


def load_pad(data: bytes) -> QuantumPermutationPad:
    return read_pad(io.BytesIO(data))


def dump_container(stream: WordStream) -> bytes:
    buf = io.BytesIO()
    write_container(stream, buf)
    return buf.getvalue()


def load_container(data: bytes) -> WordStream:
    return read_container(io.BytesIO(data))
