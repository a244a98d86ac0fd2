"""Command-line front end.

    conclab bounds   --m M --p P --cx c --CX C --r 0:10:0.5
    conclab bounds   --constants --m M --CX C
    conclab sphere   --n N --m M --r R            (also --alpha, --artstein-u, --artstein, --bracket)
    conclab simulate --n 50 --m 2 --map hyp --N 100000 --seed 7
    conclab verify   --preset standard --seed 42 --out report.json
    conclab inspect  report.json

Exit codes: 0 ok, 1 violations, 2 usage, 3 unsupported exponent, 4 I/O.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import bounds as B
from . import report as R
from . import sphere_exact as S
from .montecarlo import ExperimentConfig, default_r_grid, run_verification, standard_configs

EXIT_OK, EXIT_VIOLATIONS, EXIT_USAGE, EXIT_EXPONENT, EXIT_IO = 0, 1, 2, 3, 4
SEED_ENV = "CONCLAB_SEED"
PRESETS = {"standard": standard_configs}


def parse_grid(text):
    """'start:stop:step' (endpoints included within half a step) or a single number."""
    parts = text.split(":")
    try:
        vals = [float(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}; expected start:stop:step or a number")
    if len(vals) == 1:
        return [vals[0]]
    if len(vals) != 3:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}; expected start:stop:step")
    start, stop, step = vals
    if not step > 0:
        raise argparse.ArgumentTypeError("grid step must be positive")
    if stop < start:
        raise argparse.ArgumentTypeError("grid stop must be >= start")
    k = int(math.floor((stop - start) / step + 0.5))
    return [start + i * step for i in range(k + 1)]


def parse_list(text):
    try:
        return [float(t) for t in text.split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad list {text!r}")


def _emit(rows, header, fmt, out):
    if fmt == "json":
        text = json.dumps([{h: row.get(h) for h in header} for row in rows], indent=2) + "\n"
    else:
        text = R.write_csv(rows, header)
    _write(text, out)


def _write(text, out):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _resolve_seed(seed):
    if seed is not None:
        return seed
    env = os.environ.get(SEED_ENV)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise SystemExit(f"{SEED_ENV} must be an integer (got {env!r})")
    return 0


# ---------------------------------------------------------------------------

BOUNDS_HEADER = ["r", "thm_main", "lemma23", "gromov", "cor12_spectral", "cor12_ricci", "ledoux_oleszkiewicz"]


def cmd_bounds(args, parser):
    if args.constants:
        if args.CX is None:
            parser.error("--constants needs --CX")
        k = B.constants(args.m, args.CX)
        kp = B.constants(args.m, args.CX, variant="proof-derived")
        km = B.manifold_constants(args.m)
        rows = [{"name": name, "value": value} for name, value in (
            ("A", k.A), ("A_tilde", k.A_tilde), ("B", k.B), ("B_tilde", k.B_tilde),
            ("log_A", k.log_A), ("log_A_tilde", k.log_A_tilde), ("log_B", k.log_B), ("log_B_tilde", k.log_B_tilde),
            ("log_B_proof_derived", kp.log_B),
            ("A_m", km.A), ("A_tilde_m", km.A_tilde), ("log_B_m", km.log_B), ("B_tilde_m", km.B_tilde),
        )]
        _emit(rows, ["name", "value"], args.format, args.out)
        return EXIT_OK
    missing = [flag for flag, v in (("--p", args.p), ("--cx", args.cx), ("--CX", args.CX), ("--r", args.r)) if v is None]
    if missing:
        parser.error("the following arguments are required: " + ", ".join(missing))
    try:
        profile = B.ConcentrationProfile(args.CX, args.cx, args.p)
    except ValueError as exc:
        parser.error(str(exc))
    if profile.p not in (1, 2):
        print(f"error: the main tail bound is proven only for exponential (p=1) or Gaussian (p=2) "
              f"concentration; got p={args.p}", file=sys.stderr)
        return EXIT_EXPONENT
    if any(r < 0 for r in args.r):
        parser.error("radii must be nonnegative")
    rows = B.bounds_table(profile, args.m, args.r, lambda1=args.lambda1, kappa=args.kappa,
                          lo_constant=args.lo_constant)
    _emit(rows, BOUNDS_HEADER, args.format, args.out)
    return EXIT_OK


def cmd_sphere(args, parser):
    grid = args.r
    if grid is None:
        parser.error("--r is required")
    rows = []
    if args.artstein_u:
        if args.lam is None:
            parser.error("--artstein-u needs --lambda")
        rows = [{"r": r, "u": S.artstein_u(r, args.lam)} for r in grid]
        header = ["r", "u"]
    elif args.alpha:
        if args.n is None:
            parser.error("--alpha needs --n")
        for r in grid:
            rows.append({"r": r, "alpha_exact": S.alpha_sphere_exact(args.n, r),
                         "bound_exponential": math.exp(-math.sqrt(args.n) * r / 3.0),
                         "bound_gaussian": math.exp(-(args.n - 1) * r * r / 2.0)})
        header = ["r", "alpha_exact", "bound_exponential", "bound_gaussian"]
    elif args.artstein:
        if args.n is None or args.lam is None:
            parser.error("--artstein needs --n and --lambda")
        codim = args.n - args.lam * args.n
        integral = abs(codim - round(codim)) < 1e-9 and 1 <= round(codim) <= args.n
        for r in grid:
            rows.append({"r": r, "asymptotic": S.artstein_asymptotic(args.n, args.lam, r),
                         "exact": float(S.tube_complement_exact(args.n, int(round(codim)), r)) if integral else None})
        header = ["r", "asymptotic", "exact"]
    elif args.bracket:
        if args.n is None or args.m is None:
            parser.error("--bracket needs --n and --m (the subsphere dimension)")
        for r in grid:
            row = {"r": r, "exact": S.tube_measure_exact(args.n, args.m, r)}
            if args.c is not None and args.c_prime is not None:
                b = S.artstein_bracket(args.n, args.m, r, args.c, args.c_prime)
                row.update(lower=b.lower, upper=b.upper, case=b.case)
            else:
                lo, hi = S.artstein_envelope(args.n, args.m, r)
                row.update(lower=lo, upper=hi, case=1 if math.sin(r) ** 2 < 1 - args.m / args.n else 2)
            rows.append(row)
        header = ["r", "case", "lower", "exact", "upper"]
    else:
        if args.n is None or args.m is None:
            parser.error("tube mode needs --n and --m")
        for r in grid:
            q = S.TubeQuery(args.n, args.m, r)
            rows.append({"r": r, "exact": S.tube_complement_exact(q), "bound_cor41": S.cor41_bound(q).value})
        header = ["r", "exact", "bound_cor41"]
    _emit(rows, header, args.format, args.out)
    return EXIT_OK


def _finish(doc, args):
    text = R.dumps(doc)
    if args.out:
        try:
            with open(args.out, "w") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"error: cannot write report: {exc}", file=sys.stderr)
            return EXIT_IO
    sys.stdout.write(R.summary_table(doc))
    for e in doc["experiments"]:
        for v in e["violations"]:
            print(f"violation: n={e['config']['n']} m={e['config']['m']} map={e['config']['map']} {v}",
                  file=sys.stderr)
    return EXIT_OK if doc["violation_count"] == 0 else EXIT_VIOLATIONS


def cmd_simulate(args, parser):
    seed = _resolve_seed(args.seed)
    try:
        cfg = ExperimentConfig(
            n=args.n, m=args.m, map=args.map, samples=args.N, seed=seed, scale=args.scale,
            r_grid=tuple(args.r) if args.r else default_r_grid(), q_list=tuple(args.q),
            profile=args.profile, pair_cap=args.pair_cap,
        )
    except ValueError as exc:
        parser.error(str(exc))
    rep = run_verification(cfg, threads=args.threads)
    doc = R.build_document([rep], "simulate", seed, timestamp=not args.no_timestamp)
    return _finish(doc, args)


def cmd_verify(args, parser):
    seed = _resolve_seed(args.seed)
    configs = PRESETS[args.preset](seed=seed, samples=args.N)
    reports = [run_verification(cfg, threads=args.threads) for cfg in configs]
    doc = R.build_document(reports, "verify", seed, preset=args.preset, timestamp=not args.no_timestamp)
    return _finish(doc, args)


def cmd_inspect(args, parser):
    try:
        with open(args.report) as fh:
            doc = R.loads(fh.read())
    except (OSError, ValueError) as exc:
        print(f"error: cannot read report: {exc}", file=sys.stderr)
        return EXIT_IO
    sys.stdout.write(R.summary_table(doc))
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="conclab", description="Concentration bounds, exact sphere measures and "
                                "Monte-Carlo verification for 1-Lipschitz maps into Hadamard model spaces.")
    sub = p.add_subparsers(dest="command", required=True)

    def common_out(sp):
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--out", default=None, help="output path (default stdout)")

    b = sub.add_parser("bounds", help="evaluate closed-form bounds on an r-grid")
    b.add_argument("--m", type=int, required=True, help="target dimension")
    b.add_argument("--p", type=float)
    b.add_argument("--cx", type=float, help="rate c_X of the concentration profile")
    b.add_argument("--CX", type=float, help="prefactor C_X of the concentration profile")
    b.add_argument("--r", type=parse_grid)
    b.add_argument("--lambda1", type=float, help="spectral gap (adds Gromov's and the spectral bound)")
    b.add_argument("--kappa", type=float, help="Ricci lower bound (adds the Ricci bound)")
    b.add_argument("--lo-constant", type=float, help="universal constant for the Ledoux-Oleszkiewicz comparator")
    b.add_argument("--constants", action="store_true", help="print the constant families instead")
    common_out(b)
    b.set_defaults(func=cmd_bounds)

    s = sub.add_parser("sphere", help="exact spherical measures and Artstein's formulas")
    s.add_argument("--n", type=int)
    s.add_argument("--m", type=int)
    s.add_argument("--r", type=parse_grid)
    s.add_argument("--lambda", dest="lam", type=float)
    s.add_argument("--c", type=float)
    s.add_argument("--c-prime", type=float)
    mode = s.add_mutually_exclusive_group()
    mode.add_argument("--alpha", action="store_true", help="concentration function of S^n")
    mode.add_argument("--artstein-u", action="store_true", help="the exponent u(r, lambda)")
    mode.add_argument("--artstein", action="store_true", help="large-n asymptotic of the tube complement")
    mode.add_argument("--bracket", action="store_true", help="bracket on mu((S^m)_r)")
    common_out(s)
    s.set_defaults(func=cmd_sphere)

    def experiment_flags(sp):
        sp.add_argument("--seed", type=int, default=None, help=f"RNG seed (falls back to ${SEED_ENV}, then 0)")
        sp.add_argument("--threads", type=int, default=1)
        sp.add_argument("--out", default=None, help="path of the JSON report")
        sp.add_argument("--no-timestamp", action="store_true")

    sim = sub.add_parser("simulate", help="run one Monte-Carlo experiment")
    sim.add_argument("--n", type=int, required=True)
    sim.add_argument("--m", type=int, required=True)
    sim.add_argument("--map", choices=("proj", "hyp"), default="proj")
    sim.add_argument("--N", type=int, default=100_000)
    sim.add_argument("--scale", type=float, default=ExperimentConfig.__dataclass_fields__["scale"].default)
    sim.add_argument("--profile", choices=("gaussian", "exponential"), default="gaussian")
    sim.add_argument("--r", type=parse_grid)
    sim.add_argument("--q", type=parse_list, default=[1.0, 2.0, 4.0])
    sim.add_argument("--pair-cap", type=int, default=2000)
    experiment_flags(sim)
    sim.set_defaults(func=cmd_simulate)

    v = sub.add_parser("verify", help="run a preset matrix of experiments")
    v.add_argument("--preset", choices=sorted(PRESETS), default="standard")
    v.add_argument("--N", type=int, default=100_000)
    experiment_flags(v)
    v.set_defaults(func=cmd_verify)

    i = sub.add_parser("inspect", help="print the summary table of a JSON report")
    i.add_argument("report")
    i.set_defaults(func=cmd_inspect)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except B.UnsupportedExponentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EXPONENT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
