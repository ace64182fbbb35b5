"""Exact hard-wall maximum CDF next to its formal limit exp(-1/(t^2-1)).

The product converges in n to a fixed function of t, which agrees with the
formal limit only to first order in t**-2; this prints both for a t grid.
"""

import argparse
import sys

import numpy as np

from coulomb_edge.edge import heavytail_limit_cdf
from coulomb_edge.harness import render_csv
from coulomb_edge.layers import exact_max_cdf
from coulomb_edge.potential import HardWallPareto


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=400)
    ap.add_argument("--t", default="1.25,1.5,2,3,5,10")
    args = ap.parse_args(argv)
    ts = np.array([float(v) for v in args.t.split(",")])
    exact = np.atleast_1d(exact_max_cdf(HardWallPareto(args.n), args.n, ts))
    formal = np.atleast_1d(heavytail_limit_cdf(ts))
    rows = zip(ts, exact, formal, exact - formal)
    sys.stdout.write(render_csv(("t", "exact_product", "formal_limit", "difference"), rows))


if __name__ == "__main__":
    main()
