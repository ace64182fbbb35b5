"""Command line entry point: ``coulomb-edge <subcommand> ...``.

Exit codes: 0 on success, 2 when the input is rejected, 3 when a numerical
procedure fails.
"""

import argparse
import sys

import numpy as np

from .edge import scaling_for
from .equilibrium import equilibrium_profile, radial_cdf, radial_density
from .errors import NumericError, ValidationError
from .harness import (
    ExperimentConfig,
    Law,
    default_threads,
    emit_csv,
    emit_json,
    render_csv,
    render_json,
    run_bulk_experiment,
    run_edge_experiment,
    sample_rows,
)
from .layers import exact_max_cdf
from .potential import parse_potential

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERIC = 0, 2, 3


def _floats(text):
    return tuple(float(x) for x in text.split(",") if x.strip())


def _common(sp, replicas=1000):
    sp.add_argument("--potential", default="power:alpha=2", help="e.g. power:alpha=2, quartic, hardwall")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--replicas", type=int, default=replicas)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--threads", type=int, default=None, help="default: $COULOMB_EDGE_THREADS or 1")
    sp.add_argument("--method", choices=("auto", "exact", "general"), default="auto")
    sp.add_argument("--out", help="CSV output path")
    sp.add_argument("--report", help="JSON report path")


def build_parser():
    parser = argparse.ArgumentParser(prog="coulomb-edge", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    _common(sub.add_parser("sample", help="sample gases, one CSV row per modulus"), replicas=1)

    sp = sub.add_parser("equilibrium", help="radial equilibrium density and CDF on a grid")
    sp.add_argument("--potential", default="power:alpha=2")
    sp.add_argument("--n", type=int, default=None, help="only needed for hardwall")
    sp.add_argument("--beta", type=float, default=2.0)
    sp.add_argument("--points", type=int, default=201)
    sp.add_argument("--out")

    sp = sub.add_parser("scaling", help="edge scaling constants as JSON")
    sp.add_argument("--potential", default="power:alpha=2")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--report")

    sp = sub.add_parser("edge", help="KS test of sampled maxima against a limit or exact law")
    _common(sp)
    sp.add_argument("--law", choices=[law.value for law in Law], default=Law.EXACT.value)

    sp = sub.add_parser("bulk", help="radial empirical CDF against the equilibrium CDF")
    _common(sp, replicas=1)

    sp = sub.add_parser("heavy-tail", help="hard-wall maxima on a grid of t")
    _common(sp)
    sp.set_defaults(potential="hardwall")
    sp.add_argument("--t-grid", type=_floats, default=(1.5, 2.0, 3.0))

    sp = sub.add_parser("exact-cdf", help="P(max modulus <= t) by the layer product")
    sp.add_argument("--potential", default="power:alpha=2")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--t-grid", type=_floats, required=True)
    sp.add_argument("--out")
    return parser


def _print_or_write(text, path):
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _config(args, law):
    threads = args.threads if args.threads is not None else default_threads()
    return ExperimentConfig(
        potential=args.potential,
        n=args.n,
        replicas=args.replicas,
        master_seed=args.seed,
        law=law,
        threads=threads,
        method=args.method,
        t_grid=getattr(args, "t_grid", (1.5, 2.0, 3.0)),
        out=args.out,
        report=args.report,
    )


def _run(args):
    cmd = args.command
    if cmd == "sample":
        p = parse_potential(args.potential, args.n)
        rows = sample_rows(p, args.n, args.seed, args.replicas, args.method)
        _print_or_write(render_csv(("replica_id", "rank", "modulus"), rows), args.out)
    elif cmd == "equilibrium":
        p = parse_potential(args.potential, args.n)
        prof = equilibrium_profile(p, args.beta)
        r = np.linspace(prof.r0, prof.R0, args.points)
        rows = zip(r, radial_density(prof, r), radial_cdf(prof, r))
        _print_or_write(render_csv(("r", "density", "cdf"), rows), args.out)
    elif cmd == "scaling":
        sc = scaling_for(parse_potential(args.potential, args.n), args.n)
        if args.report:
            emit_json(sc.to_dict(), args.report)
        sys.stdout.write(render_json(sc.to_dict()) + "\n")
    elif cmd in ("edge", "heavy-tail"):
        law = Law(args.law) if cmd == "edge" else Law.HEAVY_TAIL
        result = run_edge_experiment(_config(args, law))
        sys.stdout.write(render_json(result.report.to_dict()) + "\n")
    elif cmd == "bulk":
        report = run_bulk_experiment(_config(args, Law.EXACT))
        sys.stdout.write(render_json(report.to_dict()) + "\n")
    elif cmd == "exact-cdf":
        p = parse_potential(args.potential, args.n)
        t = np.asarray(args.t_grid)
        rows = list(zip(t, np.atleast_1d(exact_max_cdf(p, args.n, t))))
        if args.out:
            emit_csv(args.out, ("t", "cdf"), rows)
        else:
            sys.stdout.write(render_csv(("t", "cdf"), rows))


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        _run(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
