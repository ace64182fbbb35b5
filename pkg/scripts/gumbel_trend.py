"""Distance between the exact law of the rescaled maximum and the Gumbel law.

No sampling: the exact CDF is the product of incomplete-gamma layer CDFs.
Prints one CSV row per (alpha, n) with the sup over the x grid.

    python3 scripts/gumbel_trend.py --alphas 1,2,3 --max-exponent 7
"""

import argparse
import sys

import numpy as np

from coulomb_edge.edge import gumbel_cdf, power_scaling
from coulomb_edge.harness import render_csv
from coulomb_edge.layers import exact_max_cdf
from coulomb_edge.potential import Power


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--alphas", default="1,2,3")
    ap.add_argument("--max-exponent", type=int, default=6)
    ap.add_argument("--x", default="-1,0,1,2")
    args = ap.parse_args(argv)

    xs = np.array([float(v) for v in args.x.split(",")])
    rows = []
    for alpha in (float(a) for a in args.alphas.split(",")):
        for e in range(3, args.max_exponent + 1):
            n = 10**e
            sc = power_scaling(alpha, n)
            gap = np.abs(exact_max_cdf(Power(alpha), n, sc.b_n + xs / sc.a_n) - gumbel_cdf(xs))
            rows.append((alpha, n, float(gap.max()), float(xs[gap.argmax()])))
    sys.stdout.write(render_csv(("alpha", "n", "sup_gap", "argmax_x"), rows))


if __name__ == "__main__":
    main()
