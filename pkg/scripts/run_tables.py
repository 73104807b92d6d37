"""Regenerate the reference tables and report drift against frozen values.

Usage: python scripts/run_tables.py [--out results] [--full] [--table NAME]
"""

import argparse
import sys

from spectracon.reproduce import TABLES, run_all


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="results", help="CSV output directory")
    ap.add_argument("--full", action="store_true",
                    help="include the slow order-3 map column")
    ap.add_argument("--table", choices=sorted(TABLES), default=None)
    args = ap.parse_args()

    tables = run_all(directory=args.out, full=args.full)
    if args.table is not None:
        tables = [t for t in tables if t.name == args.table]

    worst = 0.0
    for t in tables:
        delta = t.max_delta()
        worst = max(worst, delta)
        print(f"{t.name:18s} rows={len(t.rows):2d} max|delta|={delta:.2e}")
    print(f"worst drift {worst:.2e}")
    return 0 if worst < 1e-3 else 1


if __name__ == "__main__":
    sys.exit(main())
