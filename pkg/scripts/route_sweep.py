"""Compare the derivative routes on every multisegment up to a degree.

    python scripts/route_sweep.py --deg 5 --theta-cap 12
"""

import argparse
import time

from multiseg import derivative as D
from multiseg.core import normalized_multisegments


def main():
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--deg", type=int, default=5)
    p.add_argument("--theta-cap", type=int, default=12, help="skip theta when the reduced degree exceeds this")
    p.add_argument("--no-theta", action="store_true")
    args = p.parse_args()

    t0 = time.time()
    cases = theta_cases = skipped = 0
    bad = []
    for a in normalized_multisegments(args.deg):
        for k in range(1, max(s.end for s in a) + 1):
            cases += 1
            q = D.derive_irreducible(a, k, "quantum")
            if q != D.derive_irreducible(a, k, "basis_change"):
                bad.append(("basis_change", a, k))
            if args.no_theta or not a.n_ending(k) or len({s.begin for s in a}) != len(a):
                continue
            if D.reduce_to_parabolic(a, k).target.degree > args.theta_cap:
                skipped += 1
                continue
            theta_cases += 1
            if q != D.derive_irreducible(a, k, "parabolic_theta"):
                bad.append(("parabolic_theta", a, k))
    print("cases %d, theta cases %d, theta skipped %d, mismatches %d, %.1fs"
          % (cases, theta_cases, skipped, len(bad), time.time() - t0))
    for route, a, k in bad:
        print("  %s disagrees at %s, k=%d" % (route, a, k))


if __name__ == "__main__":
    main()
