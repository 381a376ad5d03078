"""
Command-line surface: enumerate, lengths, classes, chain, mix, sample, verify.

Exit codes: 0 on success, 1 when `verify` finds a failing check, 2 on
invalid configuration (argparse signals 2 itself). Rational numbers are
serialized as "num/den" strings; nothing round-trips through floats
except the sampler's chi-square statistic.

The sign-decision precision cap honours the BMWWALK_BITS_CAP environment
variable; --bits-cap overrides it per invocation.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from fractions import Fraction

from .brauer import (
    diagram_index,
    enumerate_diagrams,
    format_diagram,
    parse_diagram,
)
from .chains import (
    chi2_norm,
    compose_scan,
    delta_distribution,
    parse_theta,
    restrict,
    stationary,
    step,
    tv_distance,
)
from .classes import class_of, partition
from .sampler import run_scan, sample_distribution
from .scalars import DEFAULT_SIGN_BITS_CAP
from .verify import run_verify
from .words import length_table

SCAN_KINDS = ("random", "short", "long")


def _theta_arg(text: str) -> Fraction:
    try:
        return parse_theta(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _scan_arg(text: str) -> str:
    if text in SCAN_KINDS or (
        text.startswith("gen:") and text[4:].isdigit()
    ):
        return text
    raise argparse.ArgumentTypeError(
        f"scan must be one of {', '.join(SCAN_KINDS)} or gen:I, got {text!r}"
    )


def _diagram_arg(text: str):
    try:
        return parse_diagram(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _default_bits_cap() -> int:
    raw = os.environ.get("BMWWALK_BITS_CAP")
    return int(raw) if raw else DEFAULT_SIGN_BITS_CAP


def _frac(x: Fraction) -> tuple[int, int]:
    return x.numerator, x.denominator


def _load_order(path: str, n: int):
    with open(path, "r", encoding="utf-8") as handle:
        listing = [parse_diagram(line.strip()) for line in handle if line.strip()]
    if sorted(listing, key=lambda d: d.sort_key()) != list(enumerate_diagrams(n)):
        raise SystemExit("order file must list every diagram of Br_n exactly once")
    return listing


def cmd_enumerate(args) -> int:
    for d in enumerate_diagrams(args.n):
        print(json.dumps({"n": d.n, "edges": [list(e) for e in d.edges()]}))
    return 0


def cmd_lengths(args) -> int:
    writer = csv.writer(sys.stdout)
    writer.writerow(["diagram", "lprime", "e_count", "length"])
    table = length_table(args.n)
    for d in enumerate_diagrams(args.n):
        lp, ec, total = table[d]
        writer.writerow([format_diagram(d), lp, ec, total])
    return 0


def cmd_classes(args) -> int:
    payload = []
    for cls in partition(args.n):
        payload.append(
            {
                "lower_edges": [list(e) for e in cls.lower_edges],
                "m": cls.m,
                "size": len(cls.members),
                "members": [format_diagram(d) for d in cls.members],
            }
        )
    print(json.dumps({"n": args.n, "classes": payload}, indent=2))
    return 0


def cmd_chain(args) -> int:
    chain = compose_scan(args.scan, args.n, args.theta)
    order = (
        _load_order(args.order, args.n) if args.order else list(chain.states)
    )
    if args.out == "csv":
        writer = csv.writer(sys.stdout)
        writer.writerow(["row_state", "col_state", "numerator", "denominator"])
        for col in order:
            entries = chain.column_of(col)
            for row in order:
                v = entries.get(row)
                if v:
                    writer.writerow([format_diagram(row), format_diagram(col), *_frac(v)])
    else:
        payload = {
            "n": args.n,
            "scan": args.scan,
            "theta": str(args.theta),
            "states": [format_diagram(d) for d in order],
            "entries": [
                [format_diagram(row), format_diagram(col), f"{v.numerator}/{v.denominator}"]
                for col in order
                for row, v in sorted(
                    chain.column_of(col).items(), key=lambda kv: kv[0].sort_key()
                )
                if v
            ],
        }
        print(json.dumps(payload, indent=2))
    return 0


def cmd_mix(args) -> int:
    chain = compose_scan(args.scan, args.n, args.theta)
    rep = args.class_rep
    if rep.n != args.n:
        raise SystemExit(f"class representative has n={rep.n}, expected {args.n}")
    cls = class_of(rep)
    block = restrict(chain, cls.members)
    pi = stationary(block, cls.members, args.theta)
    dist = delta_distribution(cls.members, rep)
    writer = csv.writer(sys.stdout)
    writer.writerow(["step", "tv_num", "tv_den", "chi2_num", "chi2_den"])
    for m in range(1, args.steps + 1):
        dist = step(block, dist)
        tv = tv_distance(dist, pi)
        chi = chi2_norm(dist, pi)
        writer.writerow([m, *_frac(tv), *_frac(chi)])
    return 0


def cmd_sample(args) -> int:
    start = args.start
    if start is None:
        from .brauer import identity_diagram

        start = identity_diagram(args.n)
    elif start.n != args.n:
        raise SystemExit(f"start diagram has n={start.n}, expected {args.n}")
    report = sample_distribution(
        start, args.scan, args.theta, args.sweeps, args.count, args.seed
    )
    if args.out == "csv":
        writer = csv.writer(sys.stdout)
        writer.writerow(["diagram", "count"])
        for name, count in report.counts:
            writer.writerow([name, count])
    else:
        print(report.as_json())
    return 0


def cmd_verify(args) -> int:
    report = run_verify(
        args.n,
        args.theta,
        steps=args.steps,
        bits_cap=args.bits_cap,
        progress=lambda line: print(line, file=sys.stderr),
    )
    print(json.dumps(report, indent=2))
    return 0 if report["ok"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bmwwalk",
        description="Exact Metropolis scans on the diagram basis of the BMW algebra",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, theta=False, scan=False):
        p.add_argument("--n", type=int, required=True, help="strand count")
        if theta:
            p.add_argument("--theta", type=_theta_arg, required=True,
                           help="exact rational in (0,1), e.g. 1/2")
        if scan:
            p.add_argument("--scan", type=_scan_arg, required=True,
                           help="random | short | long | gen:I")

    p = sub.add_parser("enumerate", help="list all diagrams as JSON lines")
    common(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("lengths", help="CSV of l', e-count, and L per diagram")
    common(p)
    p.set_defaults(func=cmd_lengths)

    p = sub.add_parser("classes", help="communication classes as JSON")
    common(p)
    p.set_defaults(func=cmd_classes)

    p = sub.add_parser("chain", help="emit a scan matrix")
    common(p, theta=True, scan=True)
    p.add_argument("--out", choices=("csv", "json"), default="csv")
    p.add_argument("--order", help="file of diagram strings fixing the state order")
    p.set_defaults(func=cmd_chain)

    p = sub.add_parser("mix", help="exact TV and chi-square trajectory on a class")
    common(p, theta=True, scan=True)
    p.add_argument("--class", dest="class_rep", type=_diagram_arg, required=True,
                   help="diagram string representing the class")
    p.add_argument("--steps", type=int, default=20)
    p.set_defaults(func=cmd_mix)

    p = sub.add_parser("sample", help="seeded random walks with chi-square report")
    common(p, theta=True, scan=True)
    p.add_argument("--sweeps", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--start", type=_diagram_arg, default=None)
    p.add_argument("--out", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("verify", help="run the full invariant suite, JSON report")
    common(p, theta=True)
    p.add_argument("--steps", type=int, default=8,
                   help="chain steps for the trace-bound check")
    p.add_argument("--bits-cap", type=int, default=_default_bits_cap(),
                   help="precision cap (bits) for exact sign decisions")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.n < 1:
        raise SystemExit(2)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
