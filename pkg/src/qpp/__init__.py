"""Quantum permutation pad (QPP): permutation-table encryption of n-bit words."""

from .bits import BitString
from .cipher import (
    CipherSession,
    WordStream,
    decrypt_bits,
    decrypt_stream,
    decrypt_word,
    encrypt_bits,
    encrypt_stream,
    encrypt_word,
    otp_encrypt,
    pack_bits,
    pack_bytes,
    unpack_bits,
    unpack_bytes,
)
from .padgen import (
    Generator,
    InsufficientKeyError,
    KeyMaterial,
    QuantumPermutationPad,
    generate_pad,
    invert_pad,
    required_key_bits,
    shuffle_paper,
    shuffle_rc4ksa,
    shuffle_unbiased,
)
from .permutation import (
    DenseMatrix,
    PermutationTable,
    apply,
    commutes_with,
    compose,
    from_mapping,
    from_xor_key,
    identity,
    invert,
    is_involution,
    to_dense_matrix,
)

__version__ = "0.1.0"
