"""Command-line interface.

Exit codes: 0 success, 2 usage or I/O error, 3 numerical rejection.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .eigensolve import SingularPolynomialError
from .labgen import ExperimentConfig, read_csv, record_row, save_experiment, write_csv
from .mobius import PRESETS, Mobius2x2, coeff_norm_bound, mobius_transform
from .polycore import HomMatrixPolynomial, WeightScheme
from .sensitivity import analyze, analyze_backward
from .svgplot import scatter_svg

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 2, 3
THREADS_ENV = "MOBIUS_SENSE_THREADS"

_X_COLUMNS = {"k": "k", "rho": "rho", "cond": "cond_inf_A"}


class UsageError(Exception):
    pass


def load_matrix(spec: str) -> Mobius2x2:
    """Preset name, inline JSON or path to a JSON file.

    JSON may be ``{"a": [re, im], ...}`` or a nested 2x2 list of reals.
    """
    if spec in PRESETS:
        return PRESETS[spec]()
    if os.path.exists(spec):
        with open(spec) as fh:
            text = fh.read()
    else:
        text = spec
    try:
        doc = json.loads(text)
    except json.JSONDecodeError:
        raise UsageError(f"unknown matrix {spec!r}; presets: {', '.join(sorted(PRESETS))}") from None
    if isinstance(doc, dict):
        return Mobius2x2.from_dict(doc)
    return Mobius2x2.from_matrix(doc)


def load_poly(path: str) -> HomMatrixPolynomial:
    with open(path) as fh:
        try:
            return HomMatrixPolynomial.from_dict(json.load(fh))
        except json.JSONDecodeError as exc:
            raise UsageError(f"{path}: invalid JSON ({exc})") from None


def cmd_transform(args) -> int:
    P = load_poly(args.poly)
    A = load_matrix(args.matrix)
    text = json.dumps(mobius_transform(A, P).to_dict())
    info = (f"norm_inf(A) = {A.norm_inf:.17g}\n"
            f"norm_inf(A^-1) = {A.inv_norm_inf:.17g}\n"
            f"cond_inf(A) = {A.cond_inf:.17g}\n"
            f"coeff_norm_bound = {coeff_norm_bound(A, P):.17g}\n")
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
        sys.stdout.write(info)
    else:
        sys.stdout.write(text + "\n")
        sys.stderr.write(info)
    return EXIT_OK


def cmd_analyze(args) -> int:
    P = load_poly(args.poly)
    A = load_matrix(args.matrix)
    if args.backward:
        records = analyze_backward(A, P, args.scheme)
    else:
        records = analyze(A, P, args.scheme)
    rows = [record_row(r, k=P.degree, n=P.rows) for r in records]
    write_csv(sys.stdout, rows)
    return EXIT_OK


def _workers(args) -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            n = int(env)
        except ValueError:
            raise UsageError(f"{THREADS_ENV} must be a positive integer") from None
        if n < 1:
            raise UsageError(f"{THREADS_ENV} must be a positive integer")
        return n
    return args.workers


def cmd_experiment(args) -> int:
    build = ExperimentConfig.desk if args.scale == "desk" else ExperimentConfig.paper
    kw = {"workers": _workers(args)}
    if args.scheme:
        kw["scheme"] = args.scheme
    cfg = build(args.id, seed=args.seed, matrix_kind=args.matrix_kind, **kw)
    manifest = save_experiment(cfg, args.out, __version__)
    print(f"experiment {args.id}: {manifest['rows']} rows "
          f"({manifest['flagged_rows']} flagged, {len(manifest['dropped_trials'])} trials dropped) "
          f"in {manifest['wall_time_s']:.2f} s -> {args.out}")
    return EXIT_OK


def cmd_plot(args) -> int:
    rows = read_csv(args.csv)
    xcol = _X_COLUMNS[args.x]
    points, bounds = [], []
    for r in rows:
        if r["simple_flag"] != 1:
            continue
        x = r[xcol]
        points.append((x, r["q_exact"]))
        if args.bounds:
            bounds.append((x, r["upper"]))
    xlog = args.x in ("rho", "cond")
    labels = {"k": "degree k", "rho": "rho", "cond": "cond_inf(A)"}
    svg = scatter_svg(points, bounds, xlog=xlog, ylog=True, title=args.title or "",
                      xlabel=labels[args.x], ylabel="quotient", bound_line=xlog)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(svg)
    else:
        sys.stdout.write(svg)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mobius-sense", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("transform", help="apply a Mobius transform to a polynomial")
    t.add_argument("poly", help="polynomial JSON file")
    t.add_argument("-A", "--matrix", required=True,
                   help="preset (identity, cayley+, cayley-, reversal), inline JSON or JSON file")
    t.add_argument("-o", "--out", help="output JSON file (default: stdout)")
    t.set_defaults(func=cmd_transform)

    a = sub.add_parser("analyze", help="per-eigenvalue quotients and bounds as CSV")
    a.add_argument("poly")
    a.add_argument("-A", "--matrix", required=True)
    a.add_argument("--scheme", default="p", type=WeightScheme.parse,
                   help="weight scheme: a (absolute), p (polynomial norm), r (coefficientwise)")
    a.add_argument("--backward", action="store_true",
                   help="backward-error quotients for computed eigenpairs of M_A(P)")
    a.set_defaults(func=cmd_analyze)

    e = sub.add_parser("experiment", help="run an experiment campaign")
    e.add_argument("--id", type=int, required=True, choices=range(1, 6))
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--scale", choices=("desk", "paper"), default="desk")
    e.add_argument("--out", required=True, help="output directory")
    e.add_argument("--workers", type=int, default=1)
    e.add_argument("--scheme", type=WeightScheme.parse, default=None)
    e.add_argument("--matrix-kind", choices=("orthogonal", "illcond"), default=None,
                   help="illcond runs the backward experiment with ill-conditioned A (id 4)")
    e.set_defaults(func=cmd_experiment)

    pl = sub.add_parser("plot", help="render a results CSV as an SVG scatter plot")
    pl.add_argument("csv")
    pl.add_argument("--x", choices=tuple(_X_COLUMNS), default="k")
    pl.add_argument("--y", choices=("q",), default="q")
    pl.add_argument("--bounds", action="store_true", help="overlay upper bounds")
    pl.add_argument("--title")
    pl.add_argument("-o", "--out")
    pl.set_defaults(func=cmd_plot)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SingularPolynomialError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (UsageError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
