"""Regenerate the data behind every figure as CSV files.

    python3 scripts/reproduce_figures.py --out results/ --workers 4

Each figures/<name>.json becomes results/<name>.csv. Runs are deterministic,
so re-running with a different worker count gives byte-identical files.
"""
import argparse
import glob
import os
import sys
import time

from transduction.sweep import load_spec, run_sweep

HERE = os.path.dirname(os.path.abspath(__file__))
FIGURES = os.path.join(HERE, os.pardir, "figures")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--only", nargs="*", help="figure names, e.g. fig2a fig4b")
    args = ap.parse_args(argv)

    os.makedirs(args.out, exist_ok=True)
    paths = sorted(glob.glob(os.path.join(FIGURES, "*.json")))
    if args.only:
        paths = [p for p in paths if os.path.splitext(os.path.basename(p))[0] in args.only]
    total = time.perf_counter()
    for path in paths:
        name = os.path.splitext(os.path.basename(path))[0]
        t0 = time.perf_counter()
        table = run_sweep(load_spec(path), workers=args.workers)
        with open(os.path.join(args.out, name + ".csv"), "w", encoding="utf-8", newline="") as fh:
            fh.write(table.to_csv())
        flagged = sum(1 for f in table.flags if f)
        print(f"{name:6s} {len(table.rows):6d} rows  {flagged:4d} flagged  {time.perf_counter() - t0:6.2f} s")
    print(f"total {time.perf_counter() - total:.1f} s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
