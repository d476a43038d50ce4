"""Command-line front end.

Subcommands: tensors, alpha-scan, verify, spectral, model.  Output is JSON
(CSV for alpha-scan tables); identical configuration and seed produce
byte-identical files.  Exit codes: 0 success, 1 usage or parse error,
2 mathematical hypothesis or domain violation (verify also exits 2 when a
check fails).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import invariant, model, spectral, verify
from .errors import CurvhomError, DomainError, ExprSyntaxError, HypothesisError
from .field import canonical_f, parse_field
from .geometry import Point, tensor_dump
from .sampling import DEFAULT_SEED


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage; this CLI reserves 2 for
    # mathematical failures, so route usage problems through UsageError.
    def error(self, message):
        raise UsageError(message)


def _parse_floats(text, expected, what):
    parts = [s for s in text.split(",") if s != ""]
    try:
        values = [float(s) for s in parts]
    except ValueError as err:
        raise UsageError(f"bad {what}: {err}") from None
    if expected is not None and len(values) != expected:
        raise UsageError(f"{what} needs {expected} comma-separated reals, "
                         f"got {len(values)}")
    return values


def _parse_grid(text):
    axes = []
    for part in text.split(","):
        pieces = part.split(":")
        if len(pieces) != 3:
            raise UsageError(f"grid axis {part!r} is not start:stop:count")
        try:
            start, stop = float(pieces[0]), float(pieces[1])
            count = int(pieces[2])
        except ValueError as err:
            raise UsageError(f"bad grid axis {part!r}: {err}") from None
        if count < 1:
            raise UsageError("grid counts must be >= 1")
        axes.append((start, stop, count))
    return axes


def _resolve_seed(args):
    if args.seed is not None:
        return args.seed
    env = os.environ.get("CURVHOM_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"CURVHOM_SEED is not an integer: {env!r}") from None
    return DEFAULT_SEED


def _build_field(args):
    if getattr(args, "field", None) and getattr(args, "theta", None):
        raise UsageError("supply exactly one of --field / --theta")
    if getattr(args, "field", None):
        return parse_field(args.field, args.p)
    if getattr(args, "theta", None) is not None:
        return canonical_f(parse_field(args.theta, 1), args.p)
    raise UsageError("supply exactly one of --field / --theta")


def _emit(args, text):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(args, obj):
    _emit(args, json.dumps(obj, indent=2) + "\n")


def cmd_tensors(args):
    fld = _build_field(args)
    coords = (_parse_floats(args.point, 2 * args.p, "--point")
              if args.point else [0.0] * (2 * args.p))
    point = Point.from_flat(np.array(coords), args.p)
    if args.format == "csv":
        raise UsageError("tensors output is JSON only")
    _emit_json(args, tensor_dump(fld, point))
    return 0


def cmd_alpha_scan(args):
    fld = _build_field(args)
    grid = _parse_grid(args.grid) if args.grid else [(-1.0, 1.0, 21)]
    threshold = args.tol if args.tol is not None else invariant.CONSTANCY_THRESHOLD
    scan = invariant.scan_alpha(fld, grid, threshold=threshold)
    summary = dict(scan.summary)
    summary["skipped_points"] = [
        {"x": x, "reason": reason} for x, reason in scan.skipped
    ]
    if args.format == "json":
        _emit_json(args, {
            "grid": [list(axis) for axis in scan.grid],
            "points": scan.points.tolist(),
            "alpha": scan.alphas.tolist(),
            "summary": summary,
        })
    else:
        csv_text = "\n".join(invariant.scan_csv_lines(scan, args.p)) + "\n"
        _emit(args, csv_text)
        if args.out:
            # table went to the file; the summary still belongs on stdout
            sys.stdout.write(json.dumps(summary) + "\n")
    return 0


def cmd_verify(args):
    report = verify.run_checks(
        p=args.p,
        seed=_resolve_seed(args),
        theta_source=args.theta if args.theta is not None else "0.5*sin(x1)",
        tol_override=args.tol,
    )
    if args.format == "csv":
        raise UsageError("verify output is JSON only")
    _emit_json(args, report)
    return 0 if report["passed"] else 2


def cmd_spectral(args):
    fld = _build_field(args)
    coords = (_parse_floats(args.point, 2 * args.p, "--point")
              if args.point else [0.0] * (2 * args.p))
    point = Point.from_flat(np.array(coords), args.p)
    rs = None
    if args.kind == "higher-jacobi":
        if not args.rs:
            raise UsageError("--rs r,s is required for kind higher-jacobi")
        parts = _parse_floats(args.rs, 2, "--rs")
        rs = (int(parts[0]), int(parts[1]))
    elif args.rs:
        raise UsageError("--rs only applies to kind higher-jacobi")
    eig_tol = args.tol if args.tol is not None else 1e-7
    report = spectral.sample_constancy(
        args.kind, fld, point, args.n, _resolve_seed(args), rs=rs,
        eig_tol=eig_tol,
    )
    if args.format == "csv":
        raise UsageError("spectral output is JSON only")
    _emit_json(args, report.as_dict())
    return 0


def cmd_model(args):
    if args.format == "csv":
        raise UsageError("model output is JSON only")
    _emit_json(args, model.model_dump(args.p))
    return 0


def _add_common(sub, *, need_field=False, default_p=None):
    sub.add_argument("--p", type=int, required=default_p is None,
                     default=default_p, help="dimension p (metric lives on R^{2p})")
    if need_field:
        sub.add_argument("--field", help="field expression over x1..xp")
        sub.add_argument("--theta",
                         help="theta(x1); implies the field 0.5*|x|^2 + theta")
    sub.add_argument("--tol", type=float, default=None,
                     help="tolerance override (meaning depends on subcommand)")
    sub.add_argument("--seed", type=int, default=None,
                     help=f"RNG seed (default: $CURVHOM_SEED or {DEFAULT_SEED})")
    sub.add_argument("--out", help="output path (default: stdout)")


def build_parser():
    parser = _Parser(prog="curvhom",
                     description="Balanced-signature metrics from scalar "
                                 "fields: tensors, frames, invariants.")
    subs = parser.add_subparsers(dest="command", required=True)

    t = subs.add_parser("tensors", help="dump g, L, R, nabla R at a point")
    _add_common(t, need_field=True)
    t.add_argument("--point", help="2p comma-separated reals (x then y); "
                                   "default: the origin")
    t.add_argument("--format", choices=("json", "csv"), default="json")
    t.set_defaults(run=cmd_tensors)

    a = subs.add_parser("alpha-scan",
                        help="scan the invariant over a grid and report the "
                             "homogeneity verdict")
    _add_common(a, need_field=True)
    a.add_argument("--grid",
                   help="per-axis start:stop:count, comma separated; "
                        "unlisted axes are pinned at 0 (default -1:1:21)")
    a.add_argument("--format", choices=("json", "csv"), default="csv")
    a.set_defaults(run=cmd_alpha_scan)

    v = subs.add_parser("verify", help="run the cross-check suite")
    _add_common(v, default_p=3)
    v.add_argument("--theta", default=None,
                   help="theta(x1) for the checked family (default 0.5*sin(x1))")
    v.add_argument("--format", choices=("json", "csv"), default="json")
    v.set_defaults(run=cmd_verify)

    s = subs.add_parser("spectral",
                        help="sampled constancy report for a curvature operator")
    _add_common(s, need_field=True)
    s.add_argument("--point", help="2p comma-separated reals; default origin")
    s.add_argument("--kind", required=True, choices=spectral.KINDS)
    s.add_argument("--n", type=int, default=50, help="number of samples")
    s.add_argument("--rs", help="subspace type r,s for higher-jacobi")
    s.add_argument("--format", choices=("json", "csv"), default="json")
    s.set_defaults(run=cmd_spectral)

    m = subs.add_parser("model",
                        help="dump the common pointwise model space")
    _add_common(m)
    m.add_argument("--format", choices=("json", "csv"), default="json")
    m.set_defaults(run=cmd_model)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.run(args)
    except UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except ExprSyntaxError as err:
        print(f"parse error: {err}", file=sys.stderr)
        return 1
    except (HypothesisError, DomainError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except CurvhomError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
