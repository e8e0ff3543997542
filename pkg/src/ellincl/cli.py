"""Command-line entry point: ``ellincl {check,gamma,contact,cover,invariant,bench}``.

Inputs are JSON documents (see :mod:`ellincl.io`) read from a path or from
stdin when the path is ``-`` or omitted. Results go to stdout as JSON (CSV for
``bench``); diagnostics go to stderr.

Exit codes: ``check`` returns 0 inside, 1 outside, 2 touching within eps.
Errors: 3 not touching (``contact``), 64 unreadable input, 65 invalid data
(dimension mismatch, non-symmetric or not positive definite shapes),
70 internal numerical failure.
"""
import argparse
import csv
import json
import sys

import numpy as np

from . import bench, io
from .errors import (
    DimensionMismatch,
    EllinclError,
    NotPositiveDefinite,
    NotSymmetric,
    NotTouching,
    ZeroDisturbance,
)
from .inclusion import DEFAULT_EPS, DEFAULT_TOL, Relation, contact_points, cover, decide, minimal_scaling, rescaled_pair
from .invariant import invariant_level, simulate_check

EXIT_CODES = {Relation.INSIDE: 0, Relation.OUTSIDE: 1, Relation.TOUCHING: 2}
EXIT_NOT_TOUCHING = 3
EXIT_PARSE = 64
EXIT_DATA = 65
EXIT_INTERNAL = 70


def _read(path):
    if path in (None, "-"):
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _emit(obj):
    json.dump(obj, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _verdict_doc(v):
    return {
        "verdict": v.relation.value,
        "iterations": v.iterations,
        "rule": v.rule,
        "exit": v.exit,
        "bracket": list(v.bracket) if v.bracket is not None else None,
    }


def cmd_check(args):
    pairs = io.pairs_from_doc(io.loads(_read(args.input)))
    verdicts = [decide(E, E0, args.eps) for E, E0 in pairs]
    if len(verdicts) == 1:
        _emit(_verdict_doc(verdicts[0]))
        return EXIT_CODES[verdicts[0].relation]
    _emit([_verdict_doc(v) for v in verdicts])
    return 0


def cmd_gamma(args):
    pairs = io.pairs_from_doc(io.loads(_read(args.input)))
    out = []
    for E, E0 in pairs:
        r = minimal_scaling(E, E0, args.tol)
        out.append(
            {
                "gamma": io.sig15(r.gamma),
                "beta_star": io.sig15(r.beta_star),
                "at_lower_boundary": r.at_lower_boundary,
            }
        )
    _emit(out[0] if len(out) == 1 else out)
    return 0


def cmd_contact(args):
    E, E0 = io.pairs_from_doc(io.loads(_read(args.input)))[0]
    doc = {}
    if args.rescale:
        gamma = minimal_scaling(E, E0, args.tol).gamma
        E0, _ = rescaled_pair(E, E0, gamma)
        doc["gamma"] = io.sig15(gamma)
        doc["E0_rescaled"] = io.ellipsoid_to_doc(E0)
    cps = contact_points(E, E0, tol=args.touch_tol)
    doc.update(
        {
            "points": [p.tolist() for p in cps.points],
            "degenerate": cps.degenerate,
            "nullspace_dim": cps.nullspace_dim,
            "residuals": [list(r) for r in cps.residuals(E, E0)],
        }
    )
    _emit(doc)
    return 0


def cmd_cover(args):
    template, ellipsoids = io.cover_from_doc(io.loads(_read(args.input)))
    r = cover(template, ellipsoids, args.tol, exploit_symmetry=not args.no_symmetry)
    _emit(
        {
            "gamma": io.sig15(r.gamma),
            "argmax_index": r.argmax_index,
            "per_ellipsoid_gammas": [io.sig15(g) for g in r.per_ellipsoid_gammas],
            "evaluations": r.evaluations,
        }
    )
    return 0


def cmd_invariant(args):
    system = io.system_from_doc(io.loads(_read(args.input)))
    r = invariant_level(system, args.tol)
    doc = {
        "gamma": io.sig15(r.gamma),
        "per_vertex_gammas": [io.sig15(g) for g in r.per_ellipsoid_gammas],
        "argmax_index": r.argmax_index,
    }
    if args.trajectory:
        x0 = np.array([float(v) for v in args.x0.split(",")]) if args.x0 else -np.ones(system.n)
        sim = simulate_check(system, r.gamma, x0, args.horizon, args.dt, args.seed)
        with open(args.trajectory, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["t"] + [f"x{i}" for i in range(system.n)] + ["v"])
            for t, x, v in zip(sim.times, sim.states, sim.values):
                writer.writerow([repr(float(t))] + [repr(float(xi)) for xi in x] + [repr(float(v))])
        doc["simulation"] = {"ok": sim.ok, "violations": sim.violations, "seed": args.seed}
    _emit(doc)
    return 0


def cmd_bench(args):
    dims = [int(d) for d in args.dims.split(",") if d.strip()]
    records = bench.run_bench(dims, args.cases, args.seed, repetitions=args.repetitions, validate=not args.no_validate)
    text = bench.records_to_csv(records)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    for n, s in bench.summarize(records).items():
        print(
            f"n={n}: {s['cases']} cases, median {s['median_ns'] / 1e6:.3f} ms, mean {s['mean_ns'] / 1e6:.3f} ms",
            file=sys.stderr,
        )
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="ellincl", description="Ellipsoid inclusion via a scalar dual function.")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_input(p):
        p.add_argument("input", nargs="?", default="-", help="JSON file (default: stdin)")
        return p

    p = with_input(sub.add_parser("check", help="decide E ⊆ E0"))
    p.add_argument("--eps", type=float, default=DEFAULT_EPS)
    p.set_defaults(func=cmd_check)

    p = with_input(sub.add_parser("gamma", help="minimal inflation/compression factor"))
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.set_defaults(func=cmd_gamma)

    p = with_input(sub.add_parser("contact", help="contact points of a touching pair"))
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--touch-tol", type=float, default=1e-8, help="allowed |sup ell + 1|")
    p.add_argument("--rescale", action="store_true", help="first rescale E0 so the pair touches")
    p.set_defaults(func=cmd_contact)

    p = with_input(sub.add_parser("cover", help="smallest level set of the template containing all ellipsoids"))
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--no-symmetry", action="store_true")
    p.set_defaults(func=cmd_cover)

    p = with_input(sub.add_parser("invariant", help="forward-invariant level set of a disturbed system"))
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--trajectory", help="write a simulated trajectory CSV here")
    p.add_argument("--x0", help="initial state, comma separated (default: all -1)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--horizon", type=float, default=30.0)
    p.add_argument("--dt", type=float, default=1e-3)
    p.set_defaults(func=cmd_invariant)

    p = sub.add_parser("bench", help="timing benchmark on random pairs (CSV)")
    p.add_argument("--dims", default="3,10,30,100")
    p.add_argument("--cases", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repetitions", type=int, default=10)
    p.add_argument("--out", help="CSV path (default: stdout)")
    p.add_argument("--no-validate", action="store_true", help="skip generation-time label checks")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (io.ParseError, OSError, UnicodeDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (DimensionMismatch, NotPositiveDefinite, NotSymmetric, ZeroDisturbance) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NotTouching as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_TOUCHING
    except (EllinclError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
