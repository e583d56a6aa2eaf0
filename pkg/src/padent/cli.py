"""Command-line front end.

Subcommands wrap the library pipelines and print deterministic text, JSON or
CSV.  Exit codes: 0 ok, 2 parse error, 3 not expansive, 4 inconclusive,
5 infinite homology, 6 non-Cauchy sequence.
"""
from __future__ import annotations

import argparse
import json
import sys

from .entropy import (
    ExpansivenessError,
    entropy_compare,
    mahler_measure,
    padic_entropy,
)
from .expansive import (
    KIND_INCONCLUSIVE,
    KIND_NOT_EXPANSIVE,
    check_classical_n1,
    check_principal_padic,
)
from .laurent import LaurentMatrix, ParseError, parse_poly
from .logdet import NotAUnitError, SingularLevelError, logdet_limit_estimate, logdet_matrix
from .padic import limit_checker
from .quotients import (
    FiniteIndexSubgroup,
    FreeResolution,
    InfiniteHomologyError,
    complex_from_resolution,
    homology,
    parse_sequence_spec,
    principal_resolution,
    subgroup_from_matrix,
)
from .torsion import NotAcyclicError, torsion_rational

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_NOT_EXPANSIVE = 3
EXIT_INCONCLUSIVE = 4
EXIT_INFINITE_HOMOLOGY = 5
EXIT_NON_CAUCHY = 6


def _emit(doc: dict, fmt: str, text_lines: list[str], csv_text: str | None = None) -> None:
    if fmt == "json":
        print(json.dumps(doc, sort_keys=True))
    elif fmt == "csv":
        sys.stdout.write(csv_text if csv_text is not None else _default_csv(doc))
    else:
        for line in text_lines:
            print(line)


def _default_csv(doc: dict) -> str:
    lines = ["key,value"]
    for k in sorted(doc):
        lines.append(f"{k},{json.dumps(doc[k], sort_keys=True)}")
    return "\n".join(lines) + "\n"


def _load_resolution(args) -> FreeResolution:
    sources = [s for s in (args.poly, args.resolution) if s]
    if len(sources) != 1:
        raise ParseError("provide exactly one of a polynomial or --resolution")
    if args.poly:
        return principal_resolution(parse_poly(args.poly, rank=args.rank))
    return FreeResolution.load(args.resolution)


def _load_poly_or_matrix(args):
    sources = [s for s in (args.poly, getattr(args, "matrix", None)) if s]
    if len(sources) != 1:
        raise ParseError("provide exactly one of a polynomial or --matrix")
    if args.poly:
        return parse_poly(args.poly, rank=args.rank)
    with open(args.matrix, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    rank = int(data["rank"])
    return LaurentMatrix(rank, [[parse_poly(s, rank) for s in row] for row in data["entries"]])


def _sequence(args, rank: int) -> list[FiniteIndexSubgroup]:
    if args.seq:
        spec = args.seq
        if not spec.startswith("diag:"):
            with open(spec, "r", encoding="utf-8") as fh:
                mats = json.load(fh)
            return [subgroup_from_matrix(m) for m in mats]
        return parse_sequence_spec(spec, rank)
    return parse_sequence_spec(f"diag:n=1..{args.levels}", rank)


def _add_common(sp, levels_default: int = 8):
    sp.add_argument("--p", type=int, help="prime p")
    sp.add_argument("--precision", type=int, default=8, help="certified p-adic digits")
    sp.add_argument("--levels", type=int, default=levels_default,
                    help="use the diagonal sequence diag(n), n = 1..levels")
    sp.add_argument("--seq", help="sequence spec `diag:n=a..b[:step=s][:scale=c]` or a JSON file")
    sp.add_argument("--format", choices=["text", "json", "csv"], default="text")
    sp.add_argument("--rank", type=int, default=None, help="ambient rank override for parsing")
    sp.add_argument("--poly", dest="poly_flag", default=None, help="polynomial string")
    sp.add_argument("poly", nargs="?", default=None, help="polynomial string (positional)")


def _resolve_poly_arg(args):
    if args.poly_flag and args.poly:
        raise ParseError("polynomial given both positionally and with --poly")
    args.poly = args.poly_flag or args.poly


def cmd_expansive(args) -> int:
    _resolve_poly_arg(args)
    if args.p is None:
        f = parse_poly(args.poly, rank=args.rank)
        verdict = check_classical_n1(f)
    else:
        target = _load_poly_or_matrix(args)
        verdict = check_principal_padic(target, args.p, args.precision)
    doc = verdict.to_json()
    _emit(doc, args.format, [f"{verdict.kind}" + (f" (exponent {verdict.exponent})"
                                                  if verdict.exponent is not None else ""),
                             f"witness: {verdict.witness}"])
    if verdict.kind == KIND_NOT_EXPANSIVE:
        return EXIT_NOT_EXPANSIVE
    if verdict.kind == KIND_INCONCLUSIVE:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def cmd_euler(args) -> int:
    _resolve_poly_arg(args)
    res = _load_resolution(args)
    subgroups = _sequence(args, res.rank)
    rows = []
    failures = 0
    for sub in subgroups:
        summary = homology(complex_from_resolution(res, sub))
        if summary.all_finite():
            chi = summary.euler_characteristic()
            orders = [d.order for d in summary.degrees]
            rows.append({"index": sub.index, "chi": str(chi), "homology_orders": orders})
        else:
            failures += 1
            rows.append({"index": sub.index, "chi": None,
                         "homology_orders": None, "error": "infinite homology"})
    doc = {"levels": rows}
    text = [f"index {r['index']}: chi = {r['chi']}  orders = {r['homology_orders']}"
            if r.get("chi") else f"index {r['index']}: infinite homology"
            for r in rows]
    csv_text = "index,chi,homology_orders\n" + "\n".join(
        f"{r['index']},{r['chi']},{'|'.join(map(str, r['homology_orders'])) if r['homology_orders'] else ''}"
        for r in rows) + "\n"
    _emit(doc, args.format, text, csv_text)
    return EXIT_INFINITE_HOMOLOGY if failures == len(rows) else EXIT_OK


def cmd_padic_entropy(args) -> int:
    _resolve_poly_arg(args)
    if args.p is None:
        raise ParseError("--p is required")
    res = _load_resolution(args)
    subgroups = _sequence(args, res.rank)
    if args.fixed_points:
        from .quotients import fixed_points_count
        pairs = [(sub.index, fixed_points_count(res, sub)) for sub in subgroups]
        conv = limit_checker(pairs, args.p, args.precision)
        doc = conv.to_json()
        doc["mode"] = "fixed-points"
        text = [f"index {lvl.index}: value = {lvl.value}" for lvl in conv.levels]
        text.append(f"cauchy: {conv.cauchy}")
        _emit(doc, args.format, text)
        return EXIT_OK if conv.cauchy else EXIT_NON_CAUCHY
    report = padic_entropy(res, args.p, subgroups, args.precision)
    doc = report.to_json()
    text = [f"index {lvl.index}: chi = {lvl.chi}  value = {lvl.value}" for lvl in report.levels]
    text.append(f"cauchy: {report.cauchy}")
    text.append(f"h_p = {report.estimate}" if report.estimate is not None
                else "h_p: no estimate (non-Cauchy)")
    _emit(doc, args.format, text, report.to_csv())
    return EXIT_OK if report.cauchy else EXIT_NON_CAUCHY


def cmd_compare(args) -> int:
    _resolve_poly_arg(args)
    if args.p is None:
        raise ParseError("--p is required")
    if not args.poly:
        raise ParseError("compare needs a polynomial")
    f = parse_poly(args.poly, rank=args.rank)
    subgroups = _sequence(args, f.rank)
    report = entropy_compare(f, args.p, subgroups, args.precision)
    doc = report.to_json()
    text = [
        f"poly: {report.poly}",
        f"classical entropy (last level): {report.classical.estimate}",
        f"mahler measure: {report.mahler}",
        f"p-adic entropy (p={report.p}): {report.padic.estimate}",
        f"series route: {report.series_route}",
    ]
    _emit(doc, args.format, text)
    return EXIT_OK if report.padic.cauchy else EXIT_NON_CAUCHY


def cmd_mahler(args) -> int:
    _resolve_poly_arg(args)
    f = parse_poly(args.poly, rank=args.rank)
    value = mahler_measure(f)
    _emit({"poly": str(f), "mahler": value}, args.format, [f"{value:.12f}"])
    return EXIT_OK


def cmd_torsion(args) -> int:
    _resolve_poly_arg(args)
    res = _load_resolution(args)
    subgroups = _sequence(args, res.rank)
    rows = []
    for sub in subgroups:
        rep = torsion_rational(complex_from_resolution(res, sub))
        rows.append({"index": sub.index, **rep.to_json()})
    doc = {"levels": rows}
    text = [
        f"index {r['index']}: torsion = {r['torsion']['numerator']}/{r['torsion']['denominator']}"
        f"  orders = {r['homology_orders']}  match = {r['match']}"
        for r in rows
    ]
    _emit(doc, args.format, text)
    return EXIT_OK


def cmd_logdet(args) -> int:
    _resolve_poly_arg(args)
    if args.p is None:
        raise ParseError("--p is required")
    target = _load_poly_or_matrix(args)
    if not isinstance(target, LaurentMatrix):
        target = LaurentMatrix.from_scalar(target)
    doc: dict = {"p": args.p}
    text = []
    if args.route in ("series", "both"):
        series = logdet_matrix(target, args.p, args.precision)
        doc["series"] = series.to_json()
        text.append(f"series route: {series}")
    if args.route in ("limit", "both"):
        subgroups = _sequence(args, target.rank)
        conv = logdet_limit_estimate(target, args.p, subgroups, args.precision)
        doc["limit"] = conv.to_json()
        text.append(f"limit route: {conv.extrapolated}  (cauchy: {conv.cauchy})")
        if args.route == "both" and conv.extrapolated is not None:
            agree = (series - conv.extrapolated).valuation()
            doc["routes_agree_valuation"] = None if agree == float("inf") else agree
            text.append(f"routes agree to valuation {agree}")
        if not conv.cauchy:
            _emit(doc, args.format, text)
            return EXIT_NON_CAUCHY
    _emit(doc, args.format, text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="padent",
        description="multiplicative Euler characteristics, p-adic determinants "
                    "and entropy for algebraic Z^N-actions")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("expansive", help="expansiveness verdict for a presentation")
    _add_common(sp)
    sp.add_argument("--matrix", help="JSON file with a square Laurent matrix")
    sp.set_defaults(func=cmd_expansive)

    sp = sub.add_parser("euler", help="per-level Euler characteristics")
    _add_common(sp)
    sp.add_argument("--resolution", help="JSON resolution file")
    sp.set_defaults(func=cmd_euler, resolution=None)

    sp = sub.add_parser("padic-entropy", help="p-adic periodic-points entropy")
    _add_common(sp, levels_default=10)
    sp.add_argument("--resolution", help="JSON resolution file")
    sp.add_argument("--fixed-points", action="store_true",
                    help="renormalize raw fixed-point counts instead of chi")
    sp.set_defaults(func=cmd_padic_entropy, resolution=None)

    sp = sub.add_parser("compare", help="classical vs p-adic entropy, side by side")
    _add_common(sp, levels_default=12)
    sp.set_defaults(func=cmd_compare)

    sp = sub.add_parser("mahler", help="Mahler measure of a polynomial")
    _add_common(sp)
    sp.set_defaults(func=cmd_mahler)

    sp = sub.add_parser("torsion", help="rational Milnor torsion per level")
    _add_common(sp, levels_default=4)
    sp.add_argument("--resolution", help="JSON resolution file")
    sp.set_defaults(func=cmd_torsion, resolution=None)

    sp = sub.add_parser("logdet", help="p-adic determinant, series and/or limit route")
    _add_common(sp, levels_default=10)
    sp.add_argument("--matrix", help="JSON file with a square Laurent matrix")
    sp.add_argument("--route", choices=["series", "limit", "both"], default="series")
    sp.set_defaults(func=cmd_logdet)

    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NotAUnitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_EXPANSIVE
    except ExpansivenessError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.verdict.kind == KIND_NOT_EXPANSIVE:
            return EXIT_NOT_EXPANSIVE
        return EXIT_INCONCLUSIVE
    except (InfiniteHomologyError, NotAcyclicError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFINITE_HOMOLOGY
    except SingularLevelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFINITE_HOMOLOGY
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
