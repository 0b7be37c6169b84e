"""Tabulate OTP versus QPP key entropy for every supported word size.

    python scripts/entropy_table.py --M 16
"""

import argparse

from qpp.analysis import entropy_report
from qpp.padgen import required_key_bits


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--M", type=int, default=16)
    args = parser.parse_args()

    print(f"{'n':>2} {'key bits':>12} {'OTP bits':>9} {'QPP bits':>16} {'log10(2^n!)':>12}")
    for n in range(1, 17):
        r = entropy_report(n, args.M)
        print(
            f"{n:>2} {required_key_bits(n, args.M):>12} {r.otp_bits:>9} "
            f"{r.qpp_bits:>16.2f} {r.log10_group_order:>12.2f}"
        )


if __name__ == "__main__":
    main()
