"""Command-line front end.

Exit codes: 0 on success, 1 when a verification or assertion fails, 2 on
usage or config errors.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from . import constructions, counting, fourier, oracle, sweep
from .field import PrimeField
from .varieties import PointSet, enum_paraboloid, random_subset

DEFAULT_VERIFY_PAIRS = "2:3,2:7,2:11,2:19,6:3"


def _emit(payload: str, out: str | None) -> None:
    if out:
        Path(out).write_text(payload, encoding="utf-8")
    else:
        sys.stdout.write(payload)


def _load_set(args) -> PointSet:
    if args.infile:
        return PointSet.load(args.infile)
    if args.full_paraboloid:
        p, d = args.full_paraboloid
        return enum_paraboloid(PrimeField(p), d, args.cap)
    if args.random_paraboloid:
        p, d, size = args.random_paraboloid
        return random_subset(enum_paraboloid(PrimeField(p), d, args.cap), size, args.seed)
    raise ValueError("one of --in / --full-paraboloid / --random-paraboloid is required")


def _add_set_source(sub) -> None:
    sub.add_argument("--in", dest="infile", help="point-set text file")
    sub.add_argument(
        "--full-paraboloid", nargs=2, type=int, metavar=("P", "D"), help="enumerate a paraboloid"
    )
    sub.add_argument(
        "--random-paraboloid",
        nargs=3,
        type=int,
        metavar=("P", "D", "SIZE"),
        help="seeded random paraboloid subset",
    )


def cmd_product(args) -> int:
    E = _load_set(args)
    F = PointSet.load(args.second) if args.second else None
    prods = sorted(counting.product_set(E, F))
    doc = {
        "p": E.field.p,
        "d": E.dim,
        "set_size": len(E),
        "second_size": len(F) if F else None,
        "prod_size": len(prods),
        "values": prods if len(prods) <= 1000 else None,
    }
    _emit(json.dumps(doc, indent=2) + "\n", args.out)
    return 0


def cmd_count(args) -> int:
    _emit(json.dumps(counting.counts_json(_load_set(args)), indent=2) + "\n", args.out)
    return 0


def cmd_triangles(args) -> int:
    E = _load_set(args)
    doc = {"p": E.field.p, "d": E.dim, "set_size": len(E)}
    doc.update(counting.isosceles_counts(E).as_dict())
    _emit(json.dumps(doc, indent=2) + "\n", args.out)
    return 0


def cmd_fourier_verify(args) -> int:
    tol = 1e-6
    lines = [f"{'n':>3} {'p':>5} {'max_abs_err':>14} {'plancherel_err':>16}"]
    worst = 0.0
    for item in args.pairs.split(","):
        n, p = (int(x) for x in item.split(":"))
        rep = fourier.verify_report(PrimeField(p), n, seed=args.seed)
        worst = max(worst, rep["max_abs_err"], rep["plancherel_err"])
        lines.append(
            f"{rep['n']:>3} {rep['p']:>5} {rep['max_abs_err']:>14.3e} {rep['plancherel_err']:>16.3e}"
        )
    lines.append(f"worst error {worst:.3e} (tolerance {tol:.0e})")
    _emit("\n".join(lines) + "\n", args.out)
    return 0 if worst < tol else 1


def cmd_extension_ratio(args) -> int:
    stats = fourier.extension_ratio_stats(
        PrimeField(args.p),
        n=args.n,
        r_exp=args.r_exp if args.r_exp else (2 * args.n + 4) / args.n,
        trials=args.trials,
        seed=args.seed,
        radius=args.radius,
    )
    _emit(json.dumps(stats, indent=2) + "\n", args.out)
    return 0


def cmd_construct(args) -> int:
    field = PrimeField(args.p)
    try:
        if args.kind == "lines":
            E = constructions.isotropic_lines_set(field, args.lines, args.per_line, args.seed)
            report = constructions.construction_report(
                "lines", field, E, num_lines=args.lines, points_per_line=args.per_line
            )
        else:
            builders = {
                "even2mod4": constructions.construct_even_2mod4,
                "even0mod4": constructions.construct_even_0mod4,
                "odd3mod4": constructions.construct_odd_3mod4,
            }
            E = builders[args.kind](field, args.d, args.k, args.seed)
            report = constructions.construction_report(args.kind, field, E, k=args.k)
    except (ValueError, constructions.FrameSearchError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except constructions.ConstructionError as e:
        print(f"verification failed: {e}", file=sys.stderr)
        return 1
    if args.out:
        E.save(args.out)
        Path(args.out).with_suffix(Path(args.out).suffix + ".json").write_text(
            json.dumps(report, indent=2) + "\n", encoding="utf-8"
        )
    sys.stdout.write(json.dumps(report, indent=2) + "\n")
    return 0


def cmd_sweep(args) -> int:
    try:
        config = sweep.parse_config(args.config)
    except sweep.ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    if args.threads is not None:
        config = dataclasses.replace(config, threads=args.threads)
    rows = sweep.run_sweep(config)
    fmt = args.format or config.format
    out = args.out or config.out
    payload = sweep.emit_rows(rows, fmt, out)
    if not out:
        sys.stdout.write(payload.decode("utf-8"))
    failures = sum(1 for r in rows if r.error)
    if failures:
        print(f"{failures} cell(s) recorded errors", file=sys.stderr)
    return 0


def cmd_oracle_diff(args) -> int:
    reports = oracle.run_battery(seed=args.seed, instances=args.instances)
    for rep in reports:
        print(rep.line())
    bad = [r for r in reports if not r.match]
    print(f"{len(reports) - len(bad)}/{len(reports)} checks matched")
    return 1 if bad else 0


def cmd_mpprp(args) -> int:
    try:
        if args.primes:
            primes = [int(x) for x in args.primes.split(",")]
            reports = sweep.planar_triangle_sweep(
                primes, exponent=args.exponent, trials=args.trials, seed=args.seed
            )
        else:
            field = PrimeField(args.p)
            grid = PointSet.build(
                field, 2, ((a, b) for a in range(args.p) for b in range(args.p))
            )
            X = random_subset(grid, args.size, args.seed)
            reports = [sweep.planar_triangle_check(X)]
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    rows = [
        {
            "p": r.p,
            "size": r.size,
            "t_star": r.t_star,
            "excess": r.excess,
            "min_bound": r.min_bound,
            "ratio": r.ratio,
            "ok": r.ok,
        }
        for r in reports
    ]
    _emit(json.dumps(rows, indent=2) + "\n", args.out)
    return 0 if all(r.ok for r in reports) else 1


GLOBAL_DEFAULTS = {"seed": 0, "threads": None, "out": None, "format": None, "cap": None}


def _global_flags() -> argparse.ArgumentParser:
    # SUPPRESS keeps a subparser from clobbering a value parsed before the
    # subcommand; unset attributes are filled from GLOBAL_DEFAULTS in main().
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS)
    common.add_argument("--out", default=argparse.SUPPRESS, help="output path (default stdout)")
    common.add_argument("--format", choices=["csv", "json"], default=argparse.SUPPRESS)
    common.add_argument(
        "--cap", type=int, default=argparse.SUPPRESS, help="max enumeration size"
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags()
    parser = argparse.ArgumentParser(prog="ffgeom", description=__doc__, parents=[common])
    subs = parser.add_subparsers(dest="command", required=True)

    def add(name, **kw):
        return subs.add_parser(name, parents=[common], **kw)

    sp = add("product", help="dot-product set of one or two point sets")
    _add_set_source(sp)
    sp.add_argument("--with", dest="second", help="second point-set file")
    sp.set_defaults(fn=cmd_product)

    sp = add("count", help="all counts of a point set as JSON")
    _add_set_source(sp)
    sp.set_defaults(fn=cmd_count)

    sp = add("triangles", help="isosceles triangle counts")
    _add_set_source(sp)
    sp.set_defaults(fn=cmd_triangles)

    sp = add("fourier-verify", help="zero-sphere formula vs enumeration")
    sp.add_argument("--pairs", default=DEFAULT_VERIFY_PAIRS, help="comma list of n:p")
    sp.set_defaults(fn=cmd_fourier_verify)

    sp = add("extension-ratio", help="extension-ratio statistics on spheres")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--r-exp", dest="r_exp", type=float, default=None)
    sp.add_argument("--radius", type=int, default=None)
    sp.add_argument("--trials", type=int, default=200)
    sp.set_defaults(fn=cmd_extension_ratio)

    sp = add("construct", help="build and verify an extremal set")
    sp.add_argument(
        "--kind", required=True, choices=["even2mod4", "even0mod4", "odd3mod4", "lines"]
    )
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--d", type=int, default=3)
    sp.add_argument("--k", type=int, default=None)
    sp.add_argument("--lines", type=int, default=None)
    sp.add_argument("--per-line", dest="per_line", type=int, default=None)
    sp.set_defaults(fn=cmd_construct)

    sp = add("sweep", help="run a configured sweep")
    sp.add_argument("--config", required=True)
    sp.set_defaults(fn=cmd_sweep)

    sp = add("oracle-diff", help="cross-validate fast counts against oracles")
    sp.add_argument("--instances", type=int, default=20)
    sp.set_defaults(fn=cmd_oracle_diff)

    sp = add("mpprp-check", help="planar triangle bound check")
    sp.add_argument("--p", type=int, default=None)
    sp.add_argument("--size", type=int, default=None)
    sp.add_argument("--primes", default=None, help="comma list for a sweep")
    sp.add_argument("--exponent", type=float, default=1.25)
    sp.add_argument("--trials", type=int, default=1)
    sp.set_defaults(fn=cmd_mpprp)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    for key, value in GLOBAL_DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, value)
    try:
        return args.fn(args)
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
