#!/usr/bin/env python3
"""Tabulate worst-case rates, maximizing splits and baseline gaps for a range of K."""

import argparse
from fractions import Fraction

from codedcache.rates import mn_rate, rate, worst_splits


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--K-min", type=int, default=2)
    ap.add_argument("--K-max", type=int, default=12)
    args = ap.parse_args()

    print("K,m,M,R,R_dec,worst_L,R_mn,gap")
    for K in range(args.K_min, args.K_max + 1):
        for m in range(1, K):
            M = Fraction(m, K)
            r = rate(K, m)
            try:
                base = mn_rate(K, M)
                gap = f"{float(base - r):.6f}"
            except ValueError:
                base, gap = "", ""
            Ls = " ".join(map(str, worst_splits(K, m)))
            print(f"{K},{m},{M},{r},{float(r):.6f},{Ls},{base},{gap}")


if __name__ == "__main__":
    main()
