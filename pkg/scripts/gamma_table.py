#!/usr/bin/env python3
"""Print the congruence-exponent table gamma(e, n) = (n-1)e + 1 and verify
injectivity of O_L/pi_L^n -> O_E/pi_E^gamma by exhaustive enumeration."""

import argparse

from loccon.padic import PadicContext, gamma_exponent, gamma_injectivity_exhaustive


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=int, default=3)
    ap.add_argument("--max-e", type=int, default=3)
    ap.add_argument("--max-n", type=int, default=3)
    args = ap.parse_args()

    L = PadicContext(args.p, precision=12)
    print(f"p = {args.p}")
    print(f"{'e_rel':>6} {'n':>3} {'gamma':>6} {'injective':>10}")
    for e in range(1, args.max_e + 1):
        E = PadicContext(args.p, e=e, precision=12)
        for n in range(1, args.max_n + 1):
            ok, witness = gamma_injectivity_exhaustive(L, E, n)
            print(f"{e:>6} {n:>3} {gamma_exponent(e, n):>6} "
                  f"{'yes' if ok else 'NO ' + repr(witness):>10}")


if __name__ == "__main__":
    main()
