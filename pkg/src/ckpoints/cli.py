"""Command-line interface.

Subcommands:
  run            process a curve file and emit a batch report
  search-points  naive rational point search on one curve
  integrate      one Coleman integral vector, for debugging
  frobenius      the Frobenius matrix and zeta data of one curve

Exit codes: 0 full success, 2 partial per-curve failures, 1 configuration
errors.  The environment variable CK_LOG sets the log level.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from fractions import Fraction

from .chabauty import precisions
from .cohomology import frobenius_action, jacobian_order_fp, zeta_char_poly
from .coleman import coleman_integral
from .curve import (
    INFINITY,
    Point,
    parse_curve_line,
    scale_to_monic,
    search_rational_points,
)
from .errors import CkError, ParseError
from .padic import PadicRing
from .pipeline import RunConfig, emit_report, ingest, run_batch

log = logging.getLogger("ck")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ck",
        description="rational points on rank-0 genus-3 odd hyperelliptic curves",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="process a curve file")
    run.add_argument("--input", required=True, help="curve file, one [c0,...,c7] per line")
    run.add_argument("--height-bound", type=int, default=1000)
    run.add_argument("--format", choices=("json", "csv", "text"), default="text")
    run.add_argument("--prime", type=int, default=None)
    run.add_argument("--precision", type=int, default=None)
    run.add_argument("--jobs", type=int, default=1)
    run.add_argument("--timings", action="store_true", help="include timings (json loses determinism)")
    run.add_argument("--output", default=None, help="write the report to a file instead of stdout")

    sp = sub.add_parser("search-points", help="naive rational point search")
    sp.add_argument("--curve", required=True)
    sp.add_argument("--height-bound", type=int, default=1000)

    integ = sub.add_parser("integrate", help="one Coleman integral vector")
    integ.add_argument("--curve", required=True)
    integ.add_argument("--from", dest="start", required=True, help='point "x,y" or "inf"')
    integ.add_argument("--to", dest="end", required=True)
    integ.add_argument("--prime", type=int, required=True)
    integ.add_argument("--precision", type=int, default=None)

    fr = sub.add_parser("frobenius", help="Frobenius matrix and zeta data")
    fr.add_argument("--curve", required=True)
    fr.add_argument("--prime", type=int, required=True)
    fr.add_argument("--precision", type=int, default=None)
    return parser


def _parse_point(text: str) -> Point:
    text = text.strip()
    if text in ("inf", "infinity", "oo"):
        return INFINITY
    parts = text.split(",")
    if len(parts) != 2:
        raise ParseError(f'point must be "x,y" or "inf", got {text!r}')
    return Point(Fraction(parts[0].strip()), Fraction(parts[1].strip()))


def _cmd_run(args) -> int:
    curves = ingest(args.input)
    config = RunConfig(
        height_bound=args.height_bound,
        prime=args.prime,
        precision=args.precision,
        jobs=args.jobs,
        with_timings=args.timings,
    )
    report = run_batch(curves, config)
    payload = emit_report(report, args.format)
    if args.output:
        with open(args.output, "wb") as fh:
            fh.write(payload)
    else:
        sys.stdout.buffer.write(payload)
    return 2 if report.failures else 0


def _cmd_search_points(args) -> int:
    curve, pmap = scale_to_monic(parse_curve_line(args.curve))
    points = search_rational_points(curve, args.height_bound)
    for q in points:
        back = pmap.backward(q)
        print("inf" if back.at_infinity else f"({back.x}, {back.y})")
    return 0


def _cmd_integrate(args) -> int:
    curve, pmap = scale_to_monic(parse_curve_line(args.curve))
    p = args.prime
    if not curve.has_good_reduction(p):
        raise CkError(f"bad reduction at {p}")
    n = args.precision if args.precision else precisions(max(p, 7))[0]
    ring = PadicRing(p, n)
    start = _lift_rational_point(_parse_point(args.start), curve, pmap, ring)
    end = _lift_rational_point(_parse_point(args.end), curve, pmap, ring)
    fa = frobenius_action(curve, p, n)
    vec = coleman_integral(curve, fa, start, end)
    for i, v in enumerate(vec.values):
        print(f"int x^{i} dx/2y : {v}")
    print(f"precision achieved: {vec.precision}")
    return 0


def _lift_rational_point(pt: Point, curve, pmap, ring) -> Point:
    if pt.at_infinity:
        return INFINITY
    moved = pmap.forward(pt)
    if not curve.contains(moved):
        raise CkError(f"point {pt} is not on the curve")
    return Point(ring(moved.x), ring(moved.y))


def _cmd_frobenius(args) -> int:
    curve, pmap = scale_to_monic(parse_curve_line(args.curve))
    p = args.prime
    n = args.precision if args.precision else precisions(max(p, 7))[0]
    fa = frobenius_action(curve, p, n)
    doc = {
        "prime": p,
        "precision": n,
        "matrix": [[str(c) for c in row] for row in fa.matrix],
        "corrections_terms": [
            {str(w): len(poly.coeffs) for w, poly in corr.items()} for corr in fa.corrections
        ],
        "zeta_char_poly": zeta_char_poly(fa),
        "jacobian_order_fp": jacobian_order_fp(fa),
    }
    print(json.dumps(doc, indent=2, sort_keys=True))
    return 0


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("CK_LOG", "WARNING").upper())
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    handlers = {
        "run": _cmd_run,
        "search-points": _cmd_search_points,
        "integrate": _cmd_integrate,
        "frobenius": _cmd_frobenius,
    }
    try:
        return handlers[args.command](args)
    except (CkError, OSError, ValueError) as exc:
        log.error("%s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
