#!/usr/bin/env python3
"""Count subalgebra pairs whose weight-0 and weight-1 commutators differ, for each corpus algebra."""

import argparse
import json
import time

from wcomm import builders, divergence_search


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--only", nargs="*", help="restrict to these algebra names")
    ap.add_argument("--json", action="store_true", help="dump every diverging pair as JSON")
    args = ap.parse_args()

    rows = {}
    for a in builders.corpus():
        if args.only and a.name not in args.only:
            continue
        start = time.perf_counter()
        found = divergence_search(a)
        rows[a.name] = found
        if not args.json:
            sub = sum(e["weight_zero"]["value"] != e["weight_one"]["value"] for e in found)
            norm = sum(e["normal_weight_zero"]["value"] != e["normal_weight_one"]["value"] for e in found)
            exact = all(e["all_exact"] for e in found)
            print(f"{a.name:12} pairs={len(found):3}  subobject={sub:3}  normal={norm:3}  "
                  f"exact={exact}  {time.perf_counter() - start:5.1f}s")
    if args.json:
        print(json.dumps(rows, indent=2))


if __name__ == "__main__":
    main()
