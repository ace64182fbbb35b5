"""Run one edge experiment from a small config and print the quantile table.

    python3 scripts/edge_experiment.py --potential quartic --n 1000 --replicas 500
"""

import argparse

from coulomb_edge.harness import ExperimentConfig, Law, run_edge_experiment


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--potential", default="power:alpha=2")
    ap.add_argument("--n", type=int, default=1000)
    ap.add_argument("--replicas", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--law", choices=[law.value for law in Law], default="exact")
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--out")
    ap.add_argument("--report")
    args = ap.parse_args(argv)

    cfg = ExperimentConfig(
        args.potential, args.n, args.replicas, args.seed, Law(args.law), args.threads,
        out=args.out, report=args.report,
    )
    rep = run_edge_experiment(cfg).report
    print(f"{rep.potential}  n={rep.n}  m={rep.m}  law={rep.law}")
    print(f"KS D={rep.D:.5f}  p={rep.p_value:.4g}  statistic: {rep.statistic}")
    print(f"{'prob':>6} {'empirical':>12} {'reference':>12}")
    for q in rep.quantiles:
        print(f"{q['prob']:>6.2f} {q['empirical']:>12.5f} {q['reference']:>12.5f}")
    for note in rep.notes:
        print("note:", note)


if __name__ == "__main__":
    main()
