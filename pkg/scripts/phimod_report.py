#!/usr/bin/env python3
"""Build a rank-2 filtered (phi, N)-module, check weak admissibility, and
print its triangulation parameters with regularity flags."""

import argparse
import json
import sys
from fractions import Fraction

from loccon import galois
from loccon.padic import PadicContext


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--type", choices=("crys", "sst"), default="crys")
    ap.add_argument("--p", type=int, default=5)
    ap.add_argument("--k", type=int, default=2)
    ap.add_argument("--ap", type=int, default=None,
                    help="a_p for the crystalline case (must have v_p > 0)")
    ap.add_argument("--L", default="0",
                    help="L-invariant for the semistable case, or 'inf'")
    args = ap.parse_args()

    if args.type == "crys":
        ctx = PadicContext(args.p, precision=24)
        ap_val = ctx.from_int(args.ap if args.ap is not None else args.p)
        M = galois.crystalline_module(args.k, ap_val)
        d1, d2, info = galois.triangulation_parameters(args.k, ap_val)
        slopes = info["slopes"]
    else:
        ctx = galois.semistable_context(args.p, precision=24)
        L = "inf" if args.L == "inf" else ctx.from_int(int(args.L))
        M = galois.semistable_module(args.k, L, ctx=ctx)
        d1, d2 = galois.semistable_parameters(args.k, ctx)
        slopes = [str(d1.value_at_p.vp()), str(d2.value_at_p.vp() + args.k - 1)]

    wadm, cert = galois.weak_admissibility(M)
    report = {
        "label": list(M.label),
        "det_phi_valuation": str(Fraction(M.det_phi_valuation())),
        "weakly_admissible": wadm,
        "slopes": slopes,
        "delta1": {"weight": d1.weight, "regular": d1.is_regular()},
        "delta2": {"weight": d2.weight, "regular": d2.is_regular()},
    }
    json.dump(report, sys.stdout, indent=2, sort_keys=True)
    print()
    return 0 if wadm else 1


if __name__ == "__main__":
    sys.exit(main())
