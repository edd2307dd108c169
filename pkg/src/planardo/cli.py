"""Command-line interface.

Subcommands:
  sweep       criterion-vs-oracle sweep over a trinomial family grid
  prop-ab     closed-form no-root test vs unit scan over (A, B, r) triples
  planarity   planarity verdict for one Dembowski-Ostrom polynomial
  charsum     additive character sum S(f, b) as a cyclotomic integer
  field-info  deterministic field construction parameters

Exit codes: 0 success, 1 usage error, 2 a sweep found mismatches (or the
two oracles disagreed) — the artifact is still written so the offending
rows can be inspected.
"""

from __future__ import annotations

import argparse
import json
import sys

from .cyclotomic import CycInt
from .dopoly import char_sum, is_planar_bruteforce, is_planar_quadform, \
    parse_do_poly, parse_element
from .fields import build_field
from .sweeps import FAMILIES, ORACLES, SweepSpec, emit_csv, emit_json, \
    run_propab_sweep, run_sweep

_FAMILY_DEFAULT_N = {"cubic1": 3, "cubic2": 3, "quartic": 4, "monomial": 3, "custom": 3}


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the contract here reserves 2 for
    mismatch findings, so usage errors exit 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_field_args(sp, need_n=True):
    sp.add_argument("--p", type=int, required=True, help="odd prime characteristic")
    sp.add_argument("--m", type=int, default=1, help="base field is F_{p^m} (default 1)")
    if need_n:
        sp.add_argument("--n", type=int, default=3, help="extension degree over F_q (default 3)")


def build_parser():
    parser = _Parser(prog="planardo",
                     description="planar Dembowski-Ostrom trinomials: criteria, "
                                 "oracles, and cross-validation sweeps")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sw = sub.add_parser("sweep", help="cross-validate a family criterion against an oracle")
    sw.add_argument("--family", required=True, choices=FAMILIES)
    sw.add_argument("--p", type=int, required=True)
    sw.add_argument("--m", type=int, default=1)
    sw.add_argument("--n", type=int, default=None,
                    help="extension degree (defaults to the family's natural degree)")
    sw.add_argument("--mode", choices=("exhaustive", "sample"), default="exhaustive")
    sw.add_argument("--count", type=int, default=0, help="sample size for --mode sample")
    sw.add_argument("--seed", type=int, default=0)
    sw.add_argument("--oracle", choices=ORACLES, default="quadform")
    sw.add_argument("--workers", type=int, default=1)
    sw.add_argument("--full-oracle", action="store_true",
                    help="quartic: run the oracle on every pair, not only "
                         "criterion-satisfied ones")
    sw.add_argument("--counts-only", action="store_true", help="omit per-pair rows")
    sw.add_argument("--poly", default=None,
                    help="custom family template with placeholders a and b, "
                         "e.g. 'x^{q^2+1} + a*x^{q+1} + b*x^2'")
    sw.add_argument("--format", choices=("csv", "json"), default="csv")
    sw.add_argument("--out", default=None, help="write the report here (default stdout)")

    pa = sub.add_parser("prop-ab", help="no-root closed form vs unit scan over (A, B, r)")
    _add_field_args(pa, need_n=False)
    pa.add_argument("--mode", choices=("exhaustive", "sample"), default="exhaustive")
    pa.add_argument("--count", type=int, default=0)
    pa.add_argument("--seed", type=int, default=0)
    pa.add_argument("--counts-only", action="store_true")
    pa.add_argument("--format", choices=("csv", "json"), default="csv")
    pa.add_argument("--out", default=None)

    pl = sub.add_parser("planarity", help="planarity verdict for one polynomial")
    _add_field_args(pl)
    pl.add_argument("--poly", required=True,
                    help="e.g. 'x^{q^2+1} + g^4*x^{q+1} + g*x^2' or '2*x^2'")
    pl.add_argument("--oracle", choices=ORACLES, default="quadform")

    cs = sub.add_parser("charsum", help="character sum S(f, b) as a cyclotomic integer")
    _add_field_args(cs)
    cs.add_argument("--poly", required=True)
    cs.add_argument("--b", default="0", help="linear shift element (default 0)")

    fi = sub.add_parser("field-info", help="deterministic construction parameters")
    _add_field_args(fi)
    fi.add_argument("--format", choices=("text", "json"), default="text")
    return parser


def _write_report(report, fmt, out):
    text = emit_csv(report) if fmt == "csv" else emit_json(report)
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)
        summary = " ".join(f"{k}={v}" for k, v in report.counts.items() if v is not None)
        print(f"wrote {out}: {summary}")


def _report_exit(report):
    bad = report.counts.get("mismatches", 0) + report.counts.get("oracle_disagreements", 0)
    return 2 if bad else 0


def _cmd_sweep(args):
    n = args.n if args.n is not None else _FAMILY_DEFAULT_N[args.family]
    spec = SweepSpec(family=args.family, p=args.p, m=args.m, n=n, mode=args.mode,
                     count=args.count, seed=args.seed, oracle=args.oracle,
                     workers=args.workers, full_oracle=args.full_oracle,
                     counts_only=args.counts_only, poly=args.poly)
    report = run_sweep(spec)
    _write_report(report, args.format, args.out)
    return _report_exit(report)


def _cmd_propab(args):
    spec = SweepSpec(family="custom", poly="x^2", p=args.p, m=args.m, n=3,
                     mode=args.mode, count=args.count, seed=args.seed,
                     counts_only=args.counts_only)
    report = run_propab_sweep(spec)
    _write_report(report, args.format, args.out)
    return _report_exit(report)


def _cmd_planarity(args):
    ctx = build_field(args.p, args.m, args.n)
    f = parse_do_poly(ctx, args.poly)
    verdicts = {}
    if args.oracle in ("quadform", "both"):
        verdicts["quadform"] = is_planar_quadform(f)
    if args.oracle in ("bruteforce", "both"):
        verdicts["bruteforce"] = is_planar_bruteforce(f)
    print(f"field: p={ctx.p} m={ctx.m} n={ctx.n} (size {ctx.size})")
    print(f"poly: {args.poly.strip()}")
    for name, v in verdicts.items():
        if v.planar:
            print(f"planar ({name}): yes")
        else:
            w = v.witness
            print(f"planar ({name}): no  witness c=g^{w.dlog()} coeffs={list(w.coeffs())}")
    vals = {v.planar for v in verdicts.values()}
    if len(vals) > 1:
        print("oracle disagreement", file=sys.stderr)
        return 2
    return 0


def _cmd_charsum(args):
    ctx = build_field(args.p, args.m, args.n)
    f = parse_do_poly(ctx, args.poly)
    b = parse_element(ctx, args.b)
    s = char_sum(f, b)
    n2 = s.norm_squared()
    print(f"field: p={ctx.p} m={ctx.m} n={ctx.n} (size {ctx.size})")
    basis = "(1, zeta)" if ctx.p == 3 else f"(1, zeta, ..., zeta^{ctx.p - 2})"
    print(f"S(f, b) coefficients over {basis}: {list(s.coeffs)}")
    bent_here = n2 == CycInt.integer(ctx.p, ctx.size)
    print(f"|S|^2 = {list(n2.coeffs)}  equals field size: {'yes' if bent_here else 'no'}")
    return 0


def _cmd_field_info(args):
    ctx = build_field(args.p, args.m, args.n)
    fp = ctx.fingerprint()
    if args.format == "json":
        fp["q"] = ctx.q
        fp["size"] = ctx.size
        print(json.dumps(fp, indent=2))
        return 0
    print(f"p={ctx.p} m={ctx.m} n={ctx.n} q={ctx.q} size={ctx.size}")
    print(f"modulus coefficients (constant first): {fp['modulus']}")
    print(f"generator coordinates: {fp['generator']}")
    print(f"element encoding: {fp['encoding']}")
    print(f"dlog tables: {'yes' if ctx.has_dlog else 'no'}")
    return 0


_COMMANDS = {
    "sweep": _cmd_sweep,
    "prop-ab": _cmd_propab,
    "planarity": _cmd_planarity,
    "charsum": _cmd_charsum,
    "field-info": _cmd_field_info,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, ZeroDivisionError) as exc:
        print(f"planardo: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
