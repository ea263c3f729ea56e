"""List, for each r, the numbers of points where the prediction fails, and check the scan.

    python3 scripts/scan_parameters.py --rmax 40 --smax 40
"""

import argparse

from mrcfail import mrc


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--rmax", type=int, default=40)
    parser.add_argument("--smax", type=int, default=40)
    args = parser.parse_args()

    for r in range(6, args.rmax + 1):
        if r == 9:
            continue
        gammas = mrc.gamma_range(r)
        assert gammas == mrc.gamma_range_by_parameters(r), r
        print(f"r={r:3d} gamma={','.join(map(str, gammas))}")

    rows = mrc.scan(args.smax)
    strict = [row for row in rows if row.strict]
    outside = [row for row in rows if row.strict != row.in_theorem]
    print(f"scanned {len(rows)} (s, delta) pairs with s <= {args.smax}: "
          f"{len(strict)} strict, {len(outside)} disagree with the delta bound")
    for row in outside:
        print(f"  s={row.s} delta={row.delta} lower_bound={row.lower_bound} expected={row.expected}")


if __name__ == "__main__":
    main()
