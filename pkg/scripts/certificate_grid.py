#!/usr/bin/env python3
"""Sweep spectral discrepancy certificates over a (family, k) grid.

Produces the same CSV the `blockcomp batch` subcommand emits, but with the
grid built from command-line ranges instead of a JSON file.  Cells whose
pair exceeds the materialization guard land in the error column rather
than aborting the sweep.
"""

import argparse
import sys

from blockcomp.cli import batch_table


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ip-k", type=int, nargs="*", default=[2, 3, 4, 5, 6, 7, 8, 9],
                    help="inner-product block sizes")
    ap.add_argument("--disj-k", type=int, nargs="*", default=[3, 6, 9, 12],
                    help="disjointness universe sizes (multiples of 3)")
    ap.add_argument("--f", nargs="*", default=None,
                    help="optional outer-function JSON files to cross in")
    ap.add_argument("--out", help="CSV path (default: stdout)")
    args = ap.parse_args(argv)

    rows = []
    grid_ip = {"family": ["ip"], "k": args.ip_k}
    grid_disj = {"family": ["disj"], "k": args.disj_k}
    if args.f:
        grid_ip["f"] = args.f
        grid_disj["f"] = args.f
    text = batch_table(grid_ip)
    rows.append(text)
    # drop the duplicate header from the second sweep
    rows.append(batch_table(grid_disj).split("\n", 1)[1])
    csv_text = "".join(rows)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(csv_text)
    else:
        sys.stdout.write(csv_text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
