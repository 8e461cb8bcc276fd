"""Sparsity/performance trade-off over a logarithmic gamma grid."""
import argparse

import numpy as np

from syncnet.generators import from_name
from syncnet.objective import ProblemSpec
from syncnet.solver import reweighted_l1


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--q2", default="gen:path:7")
    ap.add_argument("--r", type=float, default=1.0)
    ap.add_argument("--lo", type=float, default=-4, help="log10 of the smallest nonzero gamma")
    ap.add_argument("--hi", type=float, default=0)
    ap.add_argument("--points", type=int, default=9)
    args = ap.parse_args(argv)

    spec = ProblemSpec(from_name(args.q2), r=args.r)
    gammas = [0.0, *np.logspace(args.lo, args.hi, args.points)]
    base = None
    print(f"{'gamma':>10} {'h2_part':>10} {'loss %':>7} {'nnz':>4} {'outer':>5}")
    for g in gammas:
        rep = reweighted_l1(spec.with_(gamma=float(g)))
        h2 = rep.objective.h2_part
        base = h2 if base is None else base
        print(f"{g:10.3g} {h2:10.5f} {100 * (h2 / base - 1):7.2f} {rep.nnz_offdiag:4d} {len(rep.outer):5d}")


if __name__ == "__main__":
    main()
