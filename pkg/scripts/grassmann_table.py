"""Orbit count against the derivative coefficient for packed two-end bases.

    python scripts/grassmann_table.py --max-n 5
    python scripts/grassmann_table.py --base "[1,4]+[2,5]+[3,5]+[4,5]" --k 5
"""

import argparse

from multiseg import grassmann as G
from multiseg.core import parse_ms


def show(base, k, route):
    rows = G.orbit_table(base, k, route)
    bad = [r for r in rows if not r.agree]
    print("%s  k=%d  rows %d  mismatches %d" % (base, k, len(rows), len(bad)))
    for r in rows:
        flag = "" if r.agree else "   <-- differs"
        print("  mu=%-10s r0=%d  orbits %3d  coefficient %3d%s" % (r.mu, r.r0, r.orbit_count, r.derivative, flag))
    return len(bad)


def main():
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--base")
    p.add_argument("--k", type=int)
    p.add_argument("--max-n", type=int, default=4)
    p.add_argument("--route", default="quantum", choices=("quantum", "basis_change"))
    args = p.parse_args()
    if args.base:
        show(parse_ms(args.base), args.k, args.route)
        return
    total = 0
    for n in range(1, args.max_n + 1):
        for r in range(n):
            gb = G.GrassmannBase.packed(r, n - r)
            total += show(gb.multisegment(), gb.k, args.route)
    print("total mismatches %d" % total)


if __name__ == "__main__":
    main()
