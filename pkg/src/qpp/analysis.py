"""Entropy figures and brute-force checks on small symmetric groups.

Everything exact here enumerates: S_2, S_4 and S_8 (n <= 3) are small enough
to walk completely. Larger word sizes get log-domain numbers or sampling.

Only single-use behaviour is checked. Whether a pad can be reused without
leaking information is not something these checks can show, and nothing
here claims it.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, field
from typing import Iterator

import numpy as np

from .padgen import Generator, KeyMaterial, SHUFFLES
from .permutation import (
    PermutationTable,
    _table,
    check_word_size,
    commutes_with,
    compose,
    from_xor_key,
    is_involution,
)

MAX_ENUMERABLE_BITS = 3
MAX_EXACT_COMMUTE_BITS = 2
MAX_XOR_REPORT_BITS = 8

# Upper 0.001 tail of the chi-square distribution, keyed by degrees of freedom.
CHI2_CRITICAL_0001 = {
    1: 10.828,
    3: 16.266,
    7: 24.322,
    15: 37.697,
    23: 49.728,
    31: 61.098,
    63: 103.442,
    127: 181.993,
    255: 330.520,
}


class EnumerationLimitError(ValueError):
    """Requested an exhaustive computation beyond the enumerable range."""


def log2_factorial(N: int) -> float:
    """log2(N!) as a correctly rounded sum of log2(i), i = 2..N."""
    if N < 1:
        raise ValueError(f"log2_factorial needs N >= 1, got {N}")
    return math.fsum(math.log2(i) for i in range(2, N + 1))


@dataclass(frozen=True)
class EntropyReport:
    n: int
    M: int
    otp_bits: int
    qpp_bits: float
    log10_group_order: float

    @property
    def split_form_bits(self) -> float:
        """M*n + M*log2((2^n - 1)!), the same quantity computed the other way."""
        return self.M * self.n + self.M * log2_factorial((1 << self.n) - 1)


def entropy_report(n: int, M: int) -> EntropyReport:
    n = check_word_size(n)
    if M < 1:
        raise ValueError(f"M must be >= 1, got {M}")
    per_table = log2_factorial(1 << n)
    return EntropyReport(
        n=n,
        M=M,
        otp_bits=M * n,
        qpp_bits=M * per_table,
        log10_group_order=per_table * math.log10(2),
    )


def _check_enumerable(n: int, limit: int = MAX_ENUMERABLE_BITS) -> int:
    n = check_word_size(n)
    if n > limit:
        raise EnumerationLimitError(f"n={n} is too large to enumerate (limit {limit})")
    return n


def _raw_group(n: int) -> Iterator[tuple[int, ...]]:
    return itertools.permutations(range(1 << n))


def enumerate_group(n: int) -> Iterator[PermutationTable]:
    """Every permutation of n-bit words, in lexicographic order of the map."""
    n = _check_enumerable(n)
    for perm in _raw_group(n):
        yield _table(n, np.array(perm, dtype=np.uint32))


def group_order(n: int) -> int:
    return math.factorial(1 << check_word_size(n))


def count_mappings(n: int, m: int, c: int) -> int:
    """How many permutations send plaintext m to ciphertext c (by enumeration)."""
    n = _check_enumerable(n)
    size = 1 << n
    if not (0 <= m < size and 0 <= c < size):
        raise ValueError(f"m and c must lie in [0, {size - 1}]")
    return sum(1 for perm in _raw_group(n) if perm[m] == c)


def mapping_count_matrix(n: int) -> np.ndarray:
    """counts[m, c] = number of permutations sending m to c, in one pass over the group."""
    n = _check_enumerable(n)
    size = 1 << n
    perms = np.array(list(_raw_group(n)), dtype=np.int64)
    counts = np.zeros((size, size), dtype=np.int64)
    for m in range(size):
        counts[m] = np.bincount(perms[:, m], minlength=size)
    return counts


@dataclass(frozen=True)
class XorSubgroupReport:
    n: int
    size: int
    involutions: int
    pairs_checked: int
    commuting_pairs: int
    closed: bool

    @property
    def passed(self) -> bool:
        pairs = self.size * (self.size - 1) // 2
        return (
            self.size == 1 << self.n
            and self.involutions == self.size
            and self.pairs_checked == pairs
            and self.commuting_pairs == pairs
            and self.closed
        )


def xor_subgroup_report(n: int) -> XorSubgroupReport:
    n = _check_enumerable(n, MAX_XOR_REPORT_BITS)
    size = 1 << n
    members = [from_xor_key(n, k) for k in range(size)]
    involutions = sum(is_involution(x) for x in members)
    pairs = commuting = 0
    closed = True
    for a in range(size):
        for b in range(a + 1, size):
            pairs += 1
            commuting += commutes_with(members[a], members[b])
        # Closure over all ordered pairs, including a == b.
        for b in range(size):
            if compose(members[a], members[b]) != members[a ^ b]:
                closed = False
    return XorSubgroupReport(n, len(set(members)), involutions, pairs, commuting, closed)


def commuting_pairs_exact(n: int) -> tuple[int, int]:
    """(commuting ordered pairs, total ordered pairs) over the whole group."""
    n = _check_enumerable(n, MAX_EXACT_COMMUTE_BITS)
    perms = np.array(list(_raw_group(n)), dtype=np.int64)
    commuting = 0
    for p in perms:
        left = p[perms]  # p after q, for every q
        right = perms[:, p]  # q after p
        commuting += int(np.all(left == right, axis=1).sum())
    return commuting, len(perms) ** 2


def random_permutations(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` uniform permutations of n-bit words as rows of an array."""
    base = np.broadcast_to(np.arange(1 << n, dtype=np.int64), (count, 1 << n))
    return rng.permuted(base, axis=1)


def commuting_fraction(
    n: int,
    mode: str = "exact",
    sample_count: int = 10**6,
    seed: int = 0,
    batch: int = 10**5,
) -> float:
    """Fraction of ordered pairs (P, Q) with PQ = QP.

    ``exact`` walks the whole group (n <= 2); ``sampled`` draws uniform pairs.
    """
    if mode == "exact":
        commuting, total = commuting_pairs_exact(n)
        return commuting / total
    if mode != "sampled":
        raise ValueError(f"mode must be 'exact' or 'sampled', got {mode!r}")
    n = check_word_size(n)
    rng = np.random.default_rng(seed)
    hits = 0
    done = 0
    while done < sample_count:
        chunk = min(batch, sample_count - done)
        P = random_permutations(n, chunk, rng)
        Q = random_permutations(n, chunk, rng)
        PQ = np.take_along_axis(P, Q, axis=1)
        QP = np.take_along_axis(Q, P, axis=1)
        hits += int(np.all(PQ == QP, axis=1).sum())
        done += chunk
    return hits / sample_count


def chi_square_statistic(observed, expected=None) -> float:
    observed = np.asarray(observed, dtype=np.float64)
    if expected is None:
        expected = np.full_like(observed, observed.sum() / observed.size)
    expected = np.asarray(expected, dtype=np.float64)
    return float(np.sum((observed - expected) ** 2 / expected))


def critical_value(dof: int) -> float:
    try:
        return CHI2_CRITICAL_0001[dof]
    except KeyError:
        raise ValueError(f"no embedded 0.001 critical value for {dof} degrees of freedom") from None


@dataclass(frozen=True)
class UniformityResult:
    n: int
    plaintext: int
    samples: int
    generator: Generator
    histogram: tuple[int, ...]
    statistic: float
    dof: int
    critical: float
    passed: bool


def sample_key(nbits_hint: int, rng: np.random.Generator) -> KeyMaterial:
    return KeyMaterial.from_bytes(rng.bytes((nbits_hint + 7) // 8))


def uniformity_chi_square(
    n: int,
    m: int,
    samples: int,
    seed: int = 0,
    generator: Generator | str = Generator.UNBIASED,
) -> UniformityResult:
    """Encrypt m under ``samples`` freshly shuffled tables and test the ciphertexts for uniformity.

    Keys come from a seeded numpy generator. With the unbiased shuffle every
    ciphertext should be equally likely; with the verbatim ("paper") shuffle the
    statistic is still reported, but a failure there is expected.
    """
    n = check_word_size(n)
    generator = Generator.parse(generator)
    size = 1 << n
    if not 0 <= m < size:
        raise ValueError(f"plaintext {m} out of range for n={n}")
    if samples < 100 * size:
        raise ValueError(f"need at least {100 * size} samples for n={n}, got {samples}")
    rng = np.random.default_rng(seed)
    shuffle = SHUFFLES[generator]
    # Rejection sampling averages well under 2x the n * 2**n bits; 4x is headroom.
    per_table = 4 * n * size
    key = sample_key(0, rng)
    histogram = np.zeros(size, dtype=np.int64)
    for _ in range(samples):
        if key.remaining < per_table:
            key = sample_key(per_table * 4096, rng)
        histogram[shuffle(n, key).map[m]] += 1
    statistic = chi_square_statistic(histogram)
    dof = size - 1
    critical = critical_value(dof)
    return UniformityResult(
        n=n,
        plaintext=m,
        samples=samples,
        generator=generator,
        histogram=tuple(int(h) for h in histogram),
        statistic=statistic,
        dof=dof,
        critical=critical,
        passed=statistic < critical,
    )


@dataclass(frozen=True)
class SecrecyReport:
    n: int
    group_order: int | None
    log2_group_order: float
    degeneracy_per_pair: int | None
    degeneracy_uniform: bool
    uniform: bool
    chi_square_statistic: float
    commuting_pair_fraction: float
    commuting_pairs: tuple[int, int] | None = None
    notes: tuple[str, ...] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        return asdict(self)


def secrecy_report(
    n: int = 3, samples: int = 10**5, seed: int = 0, commute_samples: int = 10**5
) -> SecrecyReport:
    n = check_word_size(n)
    size = 1 << n
    exact = n <= MAX_ENUMERABLE_BITS
    if exact:
        counts = mapping_count_matrix(n)
        per_pair = math.factorial(size - 1)
        degeneracy_uniform = bool((counts == per_pair).all())
        order = group_order(n)
    else:
        per_pair = None
        degeneracy_uniform = False
        order = None
    uniform = uniformity_chi_square(n, min(3, size - 1), max(samples, 100 * size), seed)
    if n <= MAX_EXACT_COMMUTE_BITS:
        pairs = commuting_pairs_exact(n)
        fraction = pairs[0] / pairs[1]
    else:
        pairs = None
        fraction = commuting_fraction(n, "sampled", commute_samples, seed)
    return SecrecyReport(
        n=n,
        group_order=order,
        log2_group_order=log2_factorial(size),
        degeneracy_per_pair=per_pair,
        degeneracy_uniform=degeneracy_uniform,
        uniform=uniform.passed,
        chi_square_statistic=uniform.statistic,
        commuting_pair_fraction=fraction,
        commuting_pairs=pairs,
        notes=("single-use distribution only; pad reuse is not tested",),
    )
