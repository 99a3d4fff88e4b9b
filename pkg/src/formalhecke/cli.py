"""Command-line front end: law display, expression evaluation and verification suites."""
from __future__ import annotations

import argparse
import json
import sys

from .errors import AlgebraError
from .expr import ElaborationError, ExprSyntaxError, elaborate, needs_gamma, parse
from .fga import FGAContext
from .fgl import KINDS, LawSpec, build_law
from .rootdata import BUILTIN_CARTAN, build_datum
from .twisted import TwistedAlgebra
from . import verify


class UsageError(Exception):
    pass


def _law_from_args(args) -> LawSpec:
    params = {}
    for item in args.param or []:
        if "=" not in item:
            raise UsageError(f"--param expects name=value, got {item!r}")
        k, v = item.split("=", 1)
        params[k.strip()] = v.strip()
    return LawSpec.make(args.law, terms=args.terms, series=args.series, **params)


def _datum_from_args(args, hecke: bool = False):
    source = args.cartan if getattr(args, "cartan", None) else args.type
    return build_datum(source, hecke=hecke)


def _add_law_options(p: argparse.ArgumentParser, default_law: str | None = "additive") -> None:
    p.add_argument("--law", choices=KINDS, default=default_law)
    p.add_argument("--param", action="append", metavar="NAME=VALUE", help="value is a rational, 'sym' or 'inv'")
    p.add_argument("--terms", type=int, help="number of free logarithm coefficients (universal law)")
    p.add_argument("--series", help="F(u,v) as text (custom law)")


def _add_datum_options(p: argparse.ArgumentParser, default_type: str | None = "A2") -> None:
    p.add_argument("--type", choices=sorted(BUILTIN_CARTAN), default=default_type)
    p.add_argument("--cartan", metavar="FILE", help="JSON integer Cartan matrix")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="formalhecke", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    fgl = sub.add_parser("fgl", help="formal group laws")
    fgl_sub = fgl.add_subparsers(dest="action", required=True)
    show = fgl_sub.add_parser("show", help="print F, the formal inverse, mu and the exponential")
    _add_law_options(show)
    show.add_argument("--degree", type=int, default=4)
    show.add_argument("--json", action="store_true")

    ev = sub.add_parser("eval", help="evaluate an expression in the twisted algebra")
    ev.add_argument("--expr", required=True)
    ev.add_argument("--basis", choices=("delta", "X", "T"), default="delta")
    _add_law_options(ev)
    _add_datum_options(ev)
    ev.add_argument("--degree", type=int, default=4)
    ev.add_argument("--json", action="store_true")

    ver = sub.add_parser("verify", help="run verification suites")
    ver.add_argument("suite", choices=("demazure", "hecke", "transport", "all"))
    _add_law_options(ver, default_law=None)
    _add_datum_options(ver, default_type=None)
    ver.add_argument("--degree", type=int, default=verify.DEFAULT_DEGREE)
    ver.add_argument("--hecke", action="store_true", help="include the Hecke transport check")
    ver.add_argument("--workers", type=int, default=1)
    ver.add_argument("--json", action="store_true")
    ver.add_argument("--strict-undecided", action="store_true")

    probe = sub.add_parser("probe", help="evidence-gathering probes")
    probe.add_argument("target", choices=("xi-membership",))
    _add_law_options(probe, default_law="universal")
    probe.add_argument("--degree", type=int, default=5)
    probe.add_argument("--json", action="store_true")
    probe.add_argument("--strict-undecided", action="store_true")
    return parser


# commands ----------------------------------------------------------------------------


def cmd_fgl_show(args, out) -> int:
    spec = _law_from_args(args)
    D = args.degree
    # one extra degree so that mu, which loses a degree to division, is known through D
    law = build_law(spec, D + 1)
    rows = {
        "F": law.F.truncate(D),
        "inverse": law.inverse.truncate(D),
        "mu": law.mu.truncate(D),
        "exp": law.exp.truncate(D),
    }
    if args.json:
        doc = {"law": spec.describe(), "degree": D, **{k: v.render() for k, v in rows.items()}}
        out.write(json.dumps(doc, sort_keys=True, indent=1) + "\n")
    else:
        for k, v in rows.items():
            out.write(f"{k} = {v.render()} + O({D + 1})\n")
    return 0


def cmd_eval(args, out) -> int:
    tree = parse(args.expr)
    plain = _datum_from_args(args)
    hecke = args.basis == "T" or needs_gamma(tree, plain.rank)
    datum = _datum_from_args(args, hecke=hecke)
    spec = verify.normalize_law(_law_from_args(args), args.degree)
    ctx = FGAContext(datum, spec, args.degree + verify.x_slack(datum))
    value = elaborate(tree, ctx)
    if args.basis == "delta":
        coeffs = dict(value.coeffs)
    else:
        coeffs = TwistedAlgebra(ctx).to_basis(value, args.basis)
    terms = nonzero_terms_map(coeffs, args.degree)
    label = {"delta": "d", "X": "X", "T": "T"}[args.basis]
    if args.json:
        doc = {
            "expr": args.expr,
            "basis": args.basis,
            "degree": args.degree,
            "terms": {w.word_str(): c.render() for w, c in terms.items()},
        }
        out.write(json.dumps(doc, sort_keys=True, indent=1) + "\n")
    elif not terms:
        out.write("0\n")
    else:
        for w, c in terms.items():
            out.write(f"{label}[{w.word_str()}] * ({c.render()})\n")
    return 0


def nonzero_terms_map(coeffs: dict, degree: int) -> dict:
    out = {}
    for w in sorted(coeffs):
        c = coeffs[w].reduce().truncate(degree)
        if not c.num.is_zero():
            out[w] = c
    return out


def _print_reports(reports, args, out) -> int:
    if args.json:
        out.write(verify.reports_json(reports) + "\n")
    else:
        for r in reports:
            law = LawSpec(r.law["kind"], tuple(sorted(r.law["params"].items())), r.law.get("terms")).label()
            line = f"{r.status.upper():9} {r.check:30} {r.datum:10} {law} degree={r.degree} ({r.ms} ms)"
            if r.status != "pass" or r.check.startswith("probe"):
                line += " " + json.dumps(r.witness, sort_keys=True)
            out.write(line + "\n")
    return verify.exit_status(reports, args.strict_undecided)


def cmd_verify(args, out) -> int:
    D = args.degree
    if args.suite == "all":
        if args.law is None and args.type is None and args.cartan is None:
            cfg = verify.default_config()
            cfg = verify.VerifyConfig(tuple(verify.Cell(c.law, c.datum, D) for c in cfg.cells), args.workers)
        else:
            laws = [_law_from_args(args)] if args.law else list(verify.default_laws())
            tags = [args.cartan or args.type] if (args.cartan or args.type) else ["A2", "B2"]
            cfg = verify.VerifyConfig(tuple(verify.Cell(l, t, D) for t in tags for l in laws), args.workers)
        return _print_reports(verify.suite_all(cfg), args, out)
    spec = _law_from_args(args) if args.law else LawSpec.make("additive")
    datum = _datum_from_args(args) if (args.type or args.cartan) else build_datum("A2")
    if args.suite == "demazure":
        reports = verify.suite_demazure(spec, datum, D)
    elif args.suite == "hecke":
        reports = verify.suite_hecke(spec, datum, D)
    else:
        reports = verify.suite_transport(spec, datum, D, hecke=args.hecke)
    return _print_reports(reports, args, out)


def cmd_probe(args, out) -> int:
    spec = _law_from_args(args)
    if spec.kind == "universal" and spec.terms is None:
        spec = LawSpec(spec.kind, spec.params, 4, spec.series)
    report = verify.probe_xi_membership(spec, args.degree)
    return _print_reports([report], args, out)


def run_cli(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "fgl":
            return cmd_fgl_show(args, out)
        if args.command == "eval":
            return cmd_eval(args, out)
        if args.command == "verify":
            return cmd_verify(args, out)
        return cmd_probe(args, out)
    except (UsageError, ExprSyntaxError, ElaborationError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (AlgebraError, ValueError, OSError) as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return 2


def main() -> None:
    sys.exit(run_cli())
