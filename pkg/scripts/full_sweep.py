"""Exhaustive decode round trip plus the full check battery over a denominator range.

Prints a per-check failure tally; ``--skip`` drops checks from the tally.
"""

import argparse
import time

from cfpgn.verify import fuzz


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-den", type=int, default=200)
    ap.add_argument("--jobs", type=int, default=4)
    ap.add_argument("--skip", action="append", default=[])
    args = ap.parse_args()

    t0 = time.perf_counter()
    summary = fuzz(args.max_den, jobs=args.jobs)
    elapsed = time.perf_counter() - t0
    counts = {k: v for k, v in summary.failure_counts().items() if k not in args.skip}
    print(f"{summary.total} rationals with denominator <= {args.max_den} in {elapsed:.1f} s")
    if not counts:
        print("all checks passed")
    for name, k in counts.items():
        xs = [r.xi for r in summary.reports if any(c.name == name for c in r.failures)]
        shown = ", ".join(map(str, xs[:8])) + (" ..." if len(xs) > 8 else "")
        print(f"  {name}: {k}  ({shown})")


if __name__ == "__main__":
    main()
