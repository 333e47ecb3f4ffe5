#!/usr/bin/env python3
"""Print the orbit-sum basis table for a chosen group kind and cell.

Each line pairs an exponent matrix (one row per slot) with its T-monomial
and the matching coefficient of the square-root series.
"""

import argparse

from skewalg.cartan import GroupKind, invariant_basis_check
from skewalg.multipoly import format_poly
from skewalg.rings import QI
from skewalg.tseries import mono_text


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--kind", default="o", choices=["o", "so-odd", "sp", "so-even"])
    parser.add_argument("--n", type=int, default=4)
    parser.add_argument("--d", type=int, default=1)
    parser.add_argument("--wmax", type=int, default=4)
    parser.add_argument("--trunc", type=int, default=3)
    args = parser.parse_args()

    kind = GroupKind(args.kind, args.n)
    rows, failures = invariant_basis_check(kind, args.d, args.wmax, args.trunc, QI)
    width = max(len(r.lam.text()) for r in rows) if rows else 8
    for r in rows:
        print(f"{r.lam.text():<{width}}  {mono_text(r.mono):<14}  {format_poly(r.coeff)}")
    if failures:
        print("FAILURES:")
        for f in failures:
            print(f"  {f}")
        return 1
    print(f"{len(rows)} basis elements, all matched and invariant.")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
