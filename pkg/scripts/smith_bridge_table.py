#!/usr/bin/env python3
"""Compare weight-1 term commutators with Smith commutators on every normal pair of each Mal'tsev corpus algebra."""

import itertools
from collections import Counter

from wcomm import WeightedCospan, all_subuniverses, builders, cross_validate, maltsev_term
from wcomm.commutators import full_sub
from wcomm.congruences import is_normal


def main():
    for a in builders.corpus():
        if not maltsev_term(a).found:
            print(f"{a.name:12} skipped (no Mal'tsev term)")
            continue
        normals = [s for s in all_subuniverses(a) if is_normal(a, s)]
        tally, defects = Counter(), []
        for x, y in itertools.product(normals, repeat=2):
            report = cross_validate(WeightedCospan(a, x, y, full_sub(a)))
            tally.update(report["agree"].values())
            if report["defect"]:
                defects.append((x.elements, y.elements, report["agree"]))
        print(f"{a.name:12} normal pairs={len(normals) ** 2:4}  {dict(sorted(tally.items()))}  defects={len(defects)}")
        for d in defects:
            print("   ", d)


if __name__ == "__main__":
    main()
