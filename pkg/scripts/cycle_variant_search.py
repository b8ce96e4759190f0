#!/usr/bin/env python3
"""Survey transfer across every small variant of an even cycle.

Enumerates the deduplicated variants of a base cycle with added nodes,
runs the antipodal transfer scan under each coin policy, and appends
the results to a JSON-lines sink.  Prints the exact-transfer records
grouped by policy when done.  Rerunning with the same sink skips cells
that are already present.
"""

import argparse
import os
import sys
from collections import Counter

from qwalk.explorer import pst_search


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--base", type=int, default=4)
    ap.add_argument("--max-new", type=int, default=2, dest="max_new")
    ap.add_argument("--policies", default="O1,O2,O3")
    ap.add_argument("--samples", type=int, default=1500)
    ap.add_argument("--steps", type=int, default=100)
    ap.add_argument("--seed", type=int, default=int(os.environ.get("QWALK_SEED", "0")))
    ap.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    ap.add_argument("--out", default="variant_search.jsonl")
    args = ap.parse_args()

    records = pst_search(
        args.base,
        args.max_new,
        policies=[p.strip() for p in args.policies.split(",")],
        samples=args.samples,
        t_max=args.steps,
        seed=args.seed,
        sink_path=args.out,
        workers=args.workers,
    )

    counts = Counter(r.policy for r in records)
    pst_counts = Counter(r.policy for r in records if r.pst)
    print(f"{len(records)} records in {args.out}")
    for policy in sorted(counts):
        print(f"  {policy}: {counts[policy]} cells, {pst_counts.get(policy, 0)} with exact transfer")

    print("\nexact-transfer records:")
    for rec in records:
        if rec.pst:
            steps = ",".join(str(s) for s in rec.pst_steps[:6])
            more = "..." if len(rec.pst_steps) > 6 else ""
            print(f"  {rec.policy} {rec.descriptor} steps [{steps}{more}] "
                  f"frac>{0.9}: {rec.frac_over_lambda:.3f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
