"""Multiplicities of parabolic-type standard modules against parabolic KL values.

For each base with begins 1..n and ends given by a composition of n, checks
m(Phi(u), Phi(w)) = P^J_{w,u}(1) for all pairs of minimal coset representatives.

    python scripts/parabolic_kl_check.py --max-n 4
"""

import argparse
import time

from multiseg import derivative as D
from multiseg import weyl as W


def compositions(n):
    if n == 0:
        yield ()
        return
    for f in range(1, n + 1):
        for rest in compositions(n - f):
            yield (f,) + rest


def main():
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--max-n", type=int, default=4)
    args = p.parse_args()
    for n in range(1, args.max_n + 1):
        for comp in compositions(n):
            ends = [n + i for i, f in enumerate(comp) for _ in range(f)]
            pb = W.ParabolicBase(tuple(range(1, n + 1)), tuple(ends))
            t = time.time()
            reps = pb.reps()
            bad = 0
            for w in reps:
                m = D.m_coeffs(pb.phi(w))
                for u in reps:
                    if m.get(pb.phi(u), 0) != W.parabolic_kl(pb.J, w, u).at_one():
                        bad += 1
            print("n=%d ends=%s reps %d mismatches %d %.2fs" % (n, comp, len(reps), bad, time.time() - t), flush=True)


if __name__ == "__main__":
    main()
