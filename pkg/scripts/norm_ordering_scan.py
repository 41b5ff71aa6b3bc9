#!/usr/bin/env python3
"""Scan the ordering of the two normalized reordering norms.

Numerics so far suggest nu_gamma >= nu_realign on every state/class pair; a
counterexample would make the realignment norm strictly more sensitive than
partial transposition somewhere.  This scan prints the pairs and dumps any
counterexamples to JSON for inspection.

Usage: python scripts/norm_ordering_scan.py [--random N] [--seed S] [--out PATH]
"""

import argparse
import json

from momentcrit.regression import norm_ordering_records


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--random", type=int, default=40, help="extra random states")
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--out", default="norm_ordering_counterexamples.json")
    args = parser.parse_args()

    records = norm_ordering_records(extra_random=args.random, seed=args.seed)
    width = max(len(r["state"]) for r in records)
    for r in records:
        mark = "" if r["ok"] else "   <-- counterexample"
        print(
            f"{r['state']:<{width}}  {r['class']:<22}"
            f" nu_gamma={r['nu_gamma']:.9f}  nu_realign={r['nu_realign']:.9f}{mark}"
        )
    bad = [r for r in records if not r["ok"]]
    print(f"\n{len(records)} pairs scanned, {len(bad)} counterexample(s)")
    if bad:
        with open(args.out, "w") as fh:
            json.dump(bad, fh, indent=2)
        print(f"counterexamples written to {args.out}")


if __name__ == "__main__":
    main()
