"""The four routes to E X(n) side by side.

    python scripts/sandwich_table.py --alpha 1.2 2 --n 1 10 100 1000 10000

Integral1 <= exact <= Integral0 in every row; ``log10_deficit`` is
log10(1 - (Integral0 - Integral1)), which shows how close the gap comes to one.
"""
import argparse
import math
import sys

from zipfheaps import ZipfParams
from zipfheaps.expectation import (
    Lower,
    closed_form_expected_distinct,
    exact_expected_distinct,
    integral_expected_distinct,
    integral_gap,
)
from zipfheaps.records import write_records


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--alpha", type=float, nargs="+", default=[1.2, 1.5, 2.0, 3.0])
    ap.add_argument("--n", type=int, nargs="+", default=[1, 10, 100, 1000, 10000])
    args = ap.parse_args(argv)
    rows = []
    for alpha in args.alpha:
        params = ZipfParams(alpha)
        for n in args.n:
            _, log_deficit = integral_gap(params, n)
            rows.append({
                "alpha": alpha,
                "n": n,
                "integral1": integral_expected_distinct(params, n, Lower.FROM_ONE).value,
                "exact": exact_expected_distinct(params, n).value,
                "integral0": integral_expected_distinct(params, n, Lower.FROM_ZERO).value,
                "closed_form": closed_form_expected_distinct(params, n).value,
                "log10_deficit": log_deficit / math.log(10),
            })
    write_records(rows, sys.stdout)


if __name__ == "__main__":
    main()
