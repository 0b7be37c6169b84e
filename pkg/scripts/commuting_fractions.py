"""Fraction of commuting ordered pairs of word permutations.

Exact for n <= 2, sampled above. The exact fraction in S_N equals
(number of conjugacy classes) / N!, i.e. partitions(N) / N!, which gives an
independent check on the sampled figures.

    python scripts/commuting_fractions.py --samples 1000000
"""

import argparse
import math

from qpp.analysis import commuting_fraction, commuting_pairs_exact


def partitions(N):
    p = [1] + [0] * N
    for part in range(1, N + 1):
        for total in range(part, N + 1):
            p[total] += p[total - part]
    return p[N]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--samples", type=int, default=10**6)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--max-n", type=int, default=4)
    args = parser.parse_args()

    print(f"{'n':>2} {'mode':>8} {'fraction':>12} {'classes/N!':>12}")
    for n in range(1, args.max_n + 1):
        N = 2**n
        theory = partitions(N) / math.factorial(N)
        if n <= 2:
            hits, total = commuting_pairs_exact(n)
            print(f"{n:>2} {'exact':>8} {hits / total:>12.6f} {theory:>12.6f}  ({hits}/{total})")
        else:
            frac = commuting_fraction(n, "sampled", args.samples, args.seed)
            print(f"{n:>2} {'sampled':>8} {frac:>12.6f} {theory:>12.6f}")


if __name__ == "__main__":
    main()
