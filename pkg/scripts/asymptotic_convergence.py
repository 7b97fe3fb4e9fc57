"""Exact E X(n) against the Gamma asymptotic, decade by decade.

    python scripts/asymptotic_convergence.py --alpha 1.5 2 3 --max-exp 7

Prints CSV: alpha, n, exact, asymptotic, ratio and the offset exact - asymptotic,
which settles near -1/2.
"""
import argparse
import sys

from zipfheaps import ZipfParams, asymptotic_expected_distinct, exact_expected_distinct
from zipfheaps.records import write_records


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--alpha", type=float, nargs="+", default=[1.5, 2.0, 3.0])
    ap.add_argument("--max-exp", type=int, default=6)
    args = ap.parse_args(argv)
    rows = []
    for alpha in args.alpha:
        params = ZipfParams(alpha)
        for k in range(1, args.max_exp + 1):
            n = 10**k
            exact = exact_expected_distinct(params, n).value
            asym = asymptotic_expected_distinct(params, n).value
            rows.append({"alpha": alpha, "n": n, "exact": exact, "asymptotic": asym,
                         "ratio": exact / asym, "offset": exact - asym})
    write_records(rows, sys.stdout)


if __name__ == "__main__":
    main()
