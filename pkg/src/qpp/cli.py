"""Command line interface: ``qpp genpad | encrypt | decrypt | verify | entropy | demo``.

Exit codes:

    0  success
    1  a verification or demo check failed
    2  bad command line (argparse)
    3  key material missing or too short
    4  pad file invalid, or pad does not match the ciphertext
    5  file could not be read or written
    6  ciphertext container malformed
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from . import analysis, padfile
from .bits import BitString
from .cipher import CipherSession, decrypt_stream, encrypt_stream, pack_bytes, unpack_bits
from .padgen import Generator, InsufficientKeyError, KeyMaterial, generate_pad, required_key_bits
from .permutation import (
    PermutationError,
    apply,
    from_mapping,
    from_xor_key,
    invert,
    to_dense_matrix,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_KEY = 3
EXIT_PAD = 4
EXIT_IO = 5
EXIT_FORMAT = 6

DEFAULT_N = 8
DEFAULT_M = 16


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


@dataclass
class Output:
    """Collects human-readable lines and structured records for one command."""

    fmt: str = "text"

    def line(self, text: str = "") -> None:
        if self.fmt == "text":
            print(text)

    def record(self, kind: str, **fields) -> None:
        if self.fmt == "json":
            fields = {k: _named(v) for k, v in fields.items()}
            print(json.dumps({"record": kind, **fields}, default=_jsonable, sort_keys=True))


def _named(value):
    # IntEnum would otherwise serialize as a bare number.
    if isinstance(value, Generator):
        return value.name.lower()
    if isinstance(value, dict):
        return {k: _named(v) for k, v in value.items()}
    return value


def _jsonable(value):
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _read_file(path: str) -> bytes:
    try:
        if path == "-":
            return sys.stdin.buffer.read()
        return Path(path).read_bytes()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror or exc}", EXIT_IO) from None


def _write_file(path: str, data: bytes) -> None:
    try:
        if path == "-":
            sys.stdout.buffer.write(data)
            sys.stdout.buffer.flush()
        else:
            Path(path).write_bytes(data)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror or exc}", EXIT_IO) from None


def _load_key(args: argparse.Namespace, nbits: int) -> tuple[KeyMaterial, str]:
    if args.unsafe_dev_key is not None:
        rng = np.random.default_rng(args.unsafe_dev_key)
        data = rng.bytes((nbits + 7) // 8)
        return KeyMaterial.from_bytes(data), f"UNSAFE dev key (seed {args.unsafe_dev_key})"
    if args.key is None:
        raise CliError(
            "no key material: pass --key FILE (or '-' for stdin); "
            "this tool does not generate keys",
            EXIT_KEY,
        )
    try:
        data = _read_file(args.key)
    except CliError as exc:
        raise CliError(str(exc), EXIT_KEY) from None
    return KeyMaterial.from_bytes(data), args.key


def _load_pad(path: str) -> padfile.QuantumPermutationPad:
    data = _read_file(path)
    try:
        return padfile.load_pad(data)
    except padfile.FormatError as exc:
        raise CliError(f"invalid pad file {path}: {exc}", EXIT_PAD) from None


def cmd_genpad(args: argparse.Namespace, out: Output) -> int:
    generator = Generator.parse(args.generator)
    try:
        required = required_key_bits(args.n, args.M)
    except (ValueError, OverflowError) as exc:
        raise CliError(str(exc), EXIT_USAGE) from None
    key, source = _load_key(args, required)
    if generator is not Generator.UNBIASED and key.length < required:
        raise CliError(f"required {required} bits, available {key.length}", EXIT_KEY)
    try:
        pad = generate_pad(args.n, args.M, generator, key)
    except InsufficientKeyError as exc:
        raise CliError(str(exc), EXIT_KEY) from None
    data = padfile.dump_pad(pad)
    _write_file(args.out, data)
    entropy = analysis.entropy_report(args.n, args.M)
    out.line(f"pad written to {args.out} ({len(data)} bytes)")
    out.line(f"n = {pad.n}, M = {pad.M}, generator = {generator.name.lower()}")
    out.line(f"key source: {source}")
    out.line(f"key bits consumed: {key.consumed} of {key.length}")
    out.line(f"entropy: OTP {entropy.otp_bits} bits, QPP {entropy.qpp_bits:.2f} bits")
    out.record(
        "genpad",
        path=args.out,
        bytes=len(data),
        n=pad.n,
        M=pad.M,
        generator=generator,
        key_bits_consumed=key.consumed,
        key_bits_available=key.length,
        unsafe_dev_key=args.unsafe_dev_key is not None,
        entropy=asdict(entropy),
    )
    return EXIT_OK


def cmd_encrypt(args: argparse.Namespace, out: Output) -> int:
    pad = _load_pad(args.pad)
    plaintext = _read_file(args.input)
    cipher = encrypt_stream(CipherSession(pad), pack_bytes(pad.n, plaintext))
    data = padfile.dump_container(cipher)
    _write_file(args.out, data)
    if args.out != "-":
        out.line(f"encrypted {len(plaintext)} bytes into {len(cipher)} words of {pad.n} bits")
        out.record("encrypt", input_bytes=len(plaintext), words=len(cipher), n=pad.n, M=pad.M)
    return EXIT_OK


def cmd_decrypt(args: argparse.Namespace, out: Output) -> int:
    pad = _load_pad(args.pad)
    raw = _read_file(args.input)
    try:
        cipher = padfile.load_container(raw)
    except padfile.FormatError as exc:
        raise CliError(f"invalid ciphertext container: {exc}", EXIT_FORMAT) from None
    if cipher.n != pad.n:
        raise CliError(
            f"pad word size {pad.n} does not match container word size {cipher.n}", EXIT_PAD
        )
    if cipher.original_bit_length % 8:
        raise CliError(
            f"container holds {cipher.original_bit_length} bits, not whole bytes", EXIT_FORMAT
        )
    plain: BitString = unpack_bits(decrypt_stream(CipherSession(pad), cipher))
    _write_file(args.out, plain.data)
    if args.out != "-":
        out.line(f"decrypted {len(plain.data)} bytes")
        out.record("decrypt", output_bytes=len(plain.data), n=pad.n, M=pad.M)
    return EXIT_OK


# -- verify ---------------------------------------------------------------


def _suite_degeneracy(n: int | None, args, out: Output) -> bool:
    n = 3 if n is None else n
    counts = analysis.mapping_count_matrix(n)
    size = 1 << n
    expected = math.factorial(size - 1)
    order = analysis.group_order(n)
    ok = bool((counts == expected).all()) and all(int(r.sum()) == order for r in counts)
    values = sorted(set(int(v) for v in counts.ravel()))
    if ok:
        out.line(f"degeneracy n={n}: {expected} for all {size * size} (m,c) pairs; group order {order}")
    else:
        out.line(f"degeneracy n={n}: FAILED, counts seen {values}, expected {expected}")
    out.record(
        "verify.degeneracy",
        n=n,
        passed=ok,
        pairs=size * size,
        expected_per_pair=expected,
        observed_values=values,
        group_order=order,
    )
    return ok


def _suite_xor(n: int | None, args, out: Output) -> bool:
    n = 8 if n is None else n
    report = analysis.xor_subgroup_report(n)
    ok = report.passed
    status = "" if ok else "FAILED: "
    out.line(
        f"xor n={n}: {status}{report.involutions} involutions, "
        f"{report.commuting_pairs}/{report.pairs_checked} pairs commute, "
        f"{'closed' if report.closed else 'NOT closed'}"
    )
    out.record("verify.xor", passed=ok, **asdict(report))
    return ok


def _suite_commute(n: int | None, args, out: Output) -> bool:
    n = 2 if n is None else n
    if n <= analysis.MAX_EXACT_COMMUTE_BITS:
        commuting, total = analysis.commuting_pairs_exact(n)
        fraction = commuting / total
        # S_2 is abelian; from S_4 on some pair must fail to commute.
        ok = commuting == total if n == 1 else commuting < total
        out.line(
            f"commute n={n} (exact): {commuting}/{total} ordered pairs commute ({fraction:.4f})"
        )
        out.record(
            "verify.commute", n=n, mode="exact", passed=ok,
            commuting_pairs=commuting, total_pairs=total, fraction=fraction,
        )
        return ok
    fraction = analysis.commuting_fraction(n, "sampled", args.samples or 10**6, args.seed)
    ok = fraction < 0.01
    out.line(
        f"commute n={n} (sampled, {args.samples or 10**6} pairs, seed {args.seed}): "
        f"fraction {fraction:.6f} {'< 0.01' if ok else '>= 0.01 FAILED'}"
    )
    out.record(
        "verify.commute", n=n, mode="sampled", passed=ok, fraction=fraction,
        samples=args.samples or 10**6, seed=args.seed,
    )
    return ok


def _suite_uniform(n: int | None, args, out: Output) -> bool:
    n = 3 if n is None else n
    size = 1 << n
    m = min(3, size - 1)
    samples = args.samples or max(10**5, 100 * size)
    result = analysis.uniformity_chi_square(n, m, samples, args.seed, Generator.UNBIASED)
    biased = analysis.uniformity_chi_square(n, m, samples, args.seed, Generator.PAPER)
    out.line(
        f"uniform n={n} m={m} ({samples} samples, seed {args.seed}): "
        f"chi2 = {result.statistic:.3f} vs critical {result.critical} (dof {result.dof}) "
        f"-> {'pass' if result.passed else 'FAIL'}"
    )
    out.line(f"  paper shuffle, same test (reported only): chi2 = {biased.statistic:.3f}")
    out.record("verify.uniform", **asdict(result))
    out.record("verify.uniform.paper_shuffle", asserted=False, **asdict(biased))
    return result.passed


SUITES: dict[str, Callable[..., bool]] = {
    "degeneracy": _suite_degeneracy,
    "xor": _suite_xor,
    "commute": _suite_commute,
    "uniform": _suite_uniform,
}


def cmd_verify(args: argparse.Namespace, out: Output) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    results = {}
    for name in names:
        try:
            results[name] = SUITES[name](args.n, args, out)
        except (analysis.EnumerationLimitError, PermutationError, ValueError) as exc:
            raise CliError(f"verify {name}: {exc}", EXIT_USAGE) from None
    if args.suite == "all":
        report = analysis.secrecy_report(
            args.n or 3, samples=args.samples or 10**5, seed=args.seed
        )
        out.line("secrecy report:")
        for key, value in report.to_dict().items():
            out.line(f"  {key}: {value}")
        out.record("secrecy_report", **report.to_dict())
        out.line("note: pad reuse is not tested; only single-use distributions are checked")
    out.record("verify", suites=results, passed=all(results.values()))
    return EXIT_OK if all(results.values()) else EXIT_CHECK_FAILED


def cmd_entropy(args: argparse.Namespace, out: Output) -> int:
    report = analysis.entropy_report(args.n, args.M)
    out.line(f"n = {report.n}, M = {report.M}")
    out.line(f"OTP entropy: {report.otp_bits} bits")
    out.line(f"QPP entropy: {report.qpp_bits:.3f} bits")
    out.line(f"  = M*n + M*log2((2^n-1)!) = {report.split_form_bits:.3f} bits")
    out.line(f"log10(2^n!) = {report.log10_group_order:.3f}")
    out.record("entropy", split_form_bits=report.split_form_bits, **asdict(report))
    return EXIT_OK


# -- demo -----------------------------------------------------------------

WORKED_TABLE = [1, 4, 2, 5, 3, 0, 7, 6]
WORKED_INVERSE = [5, 0, 2, 4, 1, 3, 7, 6]


def _matrix_lines(rows: list[list[int]]) -> list[str]:
    return ["  [" + " ".join(str(b) for b in row) + "]" for row in rows]


def cmd_demo(args: argparse.Namespace, out: Output) -> int:
    x3 = from_xor_key(3, 3)
    pk = from_mapping(3, WORKED_TABLE)
    pk_t = invert(pk)
    checks = {
        "2 -> 1 under X_3": apply(x3, 2) == 1,
        "1 -> 2 under X_3": apply(invert(x3), 1) == 2 and apply(x3, 1) == 2,
        "3 -> 5 under P_k": apply(pk, 3) == 5,
        "5 -> 3 under P_k^T": apply(pk_t, 5) == 3 and pk_t.tolist() == WORKED_INVERSE,
    }
    dense_checks = {
        "P_k^T is the transpose of P_k": np.array_equal(
            to_dense_matrix(pk_t).bits, to_dense_matrix(pk).bits.T
        ),
        "X_3 is symmetric": np.array_equal(
            to_dense_matrix(x3).bits, to_dense_matrix(x3).bits.T
        ),
    }
    sections = [
        ("XOR encryption with key 3", x3),
        ("XOR decryption with key 3 (same matrix)", invert(x3)),
        ("generic permutation P_k", pk),
        ("decryption with the transpose P_k^T", pk_t),
    ]
    for title, table in sections:
        out.line(title + ":")
        for line in _matrix_lines(to_dense_matrix(table).rows()):
            out.line(line)
        out.line("  basis mapping: " + ", ".join(f"{i}->{table(i)}" for i in range(8)))
        out.record(
            "demo.matrix", title=title, map=table.tolist(), rows=to_dense_matrix(table).rows()
        )
    for statement, ok in {**checks, **dense_checks}.items():
        out.line(f"{'ok  ' if ok else 'FAIL'} {statement}")
        out.record("demo.check", statement=statement, passed=bool(ok))
    entropy = analysis.entropy_report(8, DEFAULT_M)
    out.line(f"log10(2^8!) = {entropy.log10_group_order:.2f} (about 10^507 permutations of bytes)")
    out.line(
        f"entropy for n=8, M=16: OTP {entropy.otp_bits} bits, QPP {entropy.qpp_bits:.1f} bits"
    )
    out.line(
        f"degeneracy at n=3: {math.factorial(7)} of {math.factorial(8)} permutations send 3 to 5"
    )
    out.record("demo.entropy", **asdict(entropy))
    passed = all(checks.values()) and all(dense_checks.values())
    return EXIT_OK if passed else EXIT_CHECK_FAILED


# -- argument parsing -----------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qpp", description="Quantum permutation pad cipher")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("genpad", parents=[common], help="derive a pad from key material")
    p.add_argument("--n", type=int, default=DEFAULT_N, help="word size in bits (default 8)")
    p.add_argument("--M", type=int, default=DEFAULT_M, help="tables in the pad (default 16)")
    p.add_argument(
        "--generator", choices=[g.name.lower() for g in Generator], default="paper"
    )
    keys = p.add_mutually_exclusive_group()
    keys.add_argument("--key", help="file with raw key bytes, '-' for stdin")
    keys.add_argument(
        "--unsafe-dev-key", type=int, metavar="SEED",
        help="derive a key from a PRNG seed (testing only, not secret)",
    )
    p.add_argument("--out", required=True, help="pad file to write")
    p.set_defaults(func=cmd_genpad)

    for name, func, help_ in (
        ("encrypt", cmd_encrypt, "encrypt a file into a ciphertext container"),
        ("decrypt", cmd_decrypt, "decrypt a ciphertext container"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("--pad", required=True)
        p.add_argument("--in", dest="input", required=True, help="input file, '-' for stdin")
        p.add_argument("--out", required=True, help="output file, '-' for stdout")
        p.set_defaults(func=func)

    p = sub.add_parser("verify", parents=[common], help="run brute-force verification suites")
    p.add_argument("suite", choices=[*SUITES, "all"])
    p.add_argument("--n", type=int, default=None, help="word size (suite default if omitted)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("entropy", parents=[common], help="entropy of an OTP vs a QPP")
    p.add_argument("--n", type=int, default=DEFAULT_N)
    p.add_argument("--M", type=int, default=DEFAULT_M)
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("demo", parents=[common], help="reproduce the worked 3-bit examples")
    p.set_defaults(func=cmd_demo)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    out = Output(args.format)
    try:
        return args.func(args, out)
    except CliError as exc:
        print(f"qpp: error: {exc}", file=sys.stderr)
        return exc.code
    except ValueError as exc:
        # Out-of-range parameters (word size, pad length, ...).
        print(f"qpp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
