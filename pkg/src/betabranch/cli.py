"""Command-line front end: `betabranch <command> ...`.

Exit codes: 0 success, 2 parse error, 3 domain error, 4 verification failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from betabranch.errors import DomainError, ParseError

EXIT_OK, EXIT_PARSE, EXIT_DOMAIN, EXIT_VERIFY = 0, 2, 3, 4


def canonical_json(obj) -> str:
    """Sorted keys, two-space indent, UTF-8 text; re-serialising parsed output is byte-identical."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)


def _csv(rows: list[dict], fields: list[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: _cell(r.get(k)) for k in fields})
    return buf.getvalue()


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (list, tuple)):
        return " ".join(str(c) for c in v)
    return str(v)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_roots(args) -> tuple[int, str]:
    from betabranch.exactnum import IntPolynomial, isolate_real_roots, parse_interval

    p = IntPolynomial.from_text(args.poly)
    if p.is_zero():
        raise ParseError("zero polynomial has no isolated roots")
    window = parse_interval(args.window) if args.window else None
    roots = isolate_real_roots(p, window)
    rows = [
        {
            "decimal": r.decimal(args.digits),
            "interval": [str(r.interval[0]), str(r.interval[1])],
            "polynomial": list(p.coeffs),
        }
        for r in roots
    ]
    if args.format == "json":
        return EXIT_OK, canonical_json({"polynomial": list(p.coeffs), "roots": rows})
    if args.format == "csv":
        return EXIT_OK, _csv(rows, ["decimal", "interval", "polynomial"])
    return EXIT_OK, "\n".join(r["decimal"] for r in rows)


def _base_and_point(args):
    from betabranch.constants import parse_base
    from betabranch.expansions import parse_point, region_of

    q = parse_base(args.q)
    x = parse_point(args.x, q)
    region_of(x, q)  # rejects points outside I_q
    return q, x


def cmd_classify(args) -> tuple[int, str]:
    from betabranch.branching import classify_sigma, is_null_infinite

    q, x = _base_and_point(args)
    v = classify_sigma(x, q, depth_limit=args.depth)
    n = is_null_infinite(x, q, depth_limit=args.depth)
    if args.format == "json":
        out = v.to_json()
        out["null_infinite"] = {"answer": n.answer, "certificate": n.certificate}
        out["q"] = q.decimal(5)
        out["x"] = str(x)
        return EXIT_OK, canonical_json(out)
    lines = [f"{v.cls}", f"q = {q.decimal(5)}  x = {x}"]
    if v.count is not None:
        lines.append(f"count: {v.count}")
    for k in sorted(v.certificate):
        lines.append(f"  {k}: {v.certificate[k]}")
    lines.append(f"null infinite: {n.answer}")
    for k in sorted(n.certificate):
        lines.append(f"  {k}: {n.certificate[k]}")
    return EXIT_OK, "\n".join(lines)


TABLE_FIELDS = ["equation", "k", "polynomial", "root_5dp", "paper_polynomial", "paper_root_5dp", "agreement"]


def cmd_tables(args) -> tuple[int, str]:
    from betabranch.search import emit_tables

    rows = [r.to_json() for r in emit_tables(args.which)]
    if args.format == "json":
        return EXIT_OK, canonical_json({"table": args.which, "rows": rows})
    if args.format == "csv":
        return EXIT_OK, _csv(rows, TABLE_FIELDS)
    from betabranch.exactnum import IntPolynomial

    lines = []
    for r in rows:
        line = f"{r['root_5dp']}  {IntPolynomial(r['polynomial'])}  {r['equation']}  [{r['agreement']}]"
        if r["agreement"] != "Match":
            printed = IntPolynomial(r["paper_polynomial"]) if r["paper_polynomial"] else "-"
            line += f"\n    printed: {r['paper_root_5dp']}  {printed}"
        lines.append(line)
    return EXIT_OK, "\n".join(lines)


def cmd_search(args) -> tuple[int, str]:
    from betabranch.constants import base
    from betabranch.exactnum import Ordering, compare, parse_interval
    from betabranch.search import b_aleph0_in

    window = None
    clipped = None
    if args.window:
        lo, hi = parse_interval(args.window)
        golden, q3 = base("golden"), base("q3")
        if compare(lo, golden) == Ordering.LESS or compare(lo, q3) != Ordering.LESS:
            raise DomainError("search window must start inside [golden ratio, q3)")
        if compare(hi, q3) == Ordering.GREATER:
            clipped = f"(q3, {hi}] lies above q3, outside the certified range, and was not searched"
            window = (lo, q3)
        else:
            window = (lo, hi)
    res = b_aleph0_in(window, depth=args.depth, workers=args.workers)
    out = res.to_json()
    if clipped:
        out["notes"].append(clipped)
    if args.format == "json":
        return EXIT_OK, canonical_json(out)
    lines = [f"bases with a null infinite special point: {len(res.accepted)}"]
    for c in res.accepted:
        b = "".join(str(d) for d in c.b)
        lines.append(f"  {c.name or '-'}  {c.root.decimal(5)}  {c.polynomial}  w = {c.w_form}  b = {b}  verified = {c.verified}")
    lines.append(f"rejected candidates: {' '.join(c.root.decimal(5) for c in res.rejected)}")
    lines.extend(f"note: {n}" for n in out["notes"])
    return EXIT_OK, "\n".join(lines)


THEOREMS = ("1.1", "1.2", "4.1", "4.2", "all")


def cmd_certify(args) -> tuple[int, str]:
    from betabranch import certify

    if args.theorem == "4.1":
        verdicts = [certify.verify_sigma_q3_structure(args.K)]
    elif args.theorem == "4.2":
        ex1, ex2 = certify.exclusion_for("q1"), certify.exclusion_for("q2")
        verdicts = [ex1, ex2]
    elif args.theorem == "1.2":
        verdicts = [certify._search_verdict()]
    else:
        verdicts = certify.assemble_main_theorems(K=args.K)
        if args.theorem == "1.1":
            verdicts = verdicts[-1:]
    failed = any(v.status == "Failed" for v in verdicts)
    code = EXIT_VERIFY if failed else EXIT_OK
    if args.format == "json":
        return code, canonical_json([v.to_json() for v in verdicts])
    lines = []
    for v in verdicts:
        lines.append(str(v))
        for e in v.evidence:
            if args.verbose or e["status"] != "pass" or e["check"] in ("conjugate", "computed forced prefix"):
                lines.append(f"  [{e['status']}] {e['check']}: {e['lhs_exact']} | {e['rhs_exact']} | {e['margin_5dp']}")
    return code, "\n".join(lines)


def cmd_tree(args) -> tuple[int, str]:
    from betabranch.branching import build_tree, tree_to_ascii, tree_to_json

    q, x = _base_and_point(args)
    t = build_tree(x, q, args.depth)
    if args.format == "json":
        return EXIT_OK, canonical_json(tree_to_json(t))
    return EXIT_OK, tree_to_ascii(t)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="betabranch", description="Exact tools for expansions in non-integer bases.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("roots", help="isolate real roots of an integer polynomial")
    r.add_argument("--poly", required=True, help="ascending coefficients, e.g. '-1,-1,1'")
    r.add_argument("--window", help="lo,hi")
    r.add_argument("--digits", type=int, default=5)
    r.add_argument("--format", choices=("text", "json", "csv"), default="text")
    r.set_defaults(func=cmd_roots)

    c = sub.add_parser("classify", help="cardinality of the expansion set of a point")
    c.add_argument("--q", required=True, help="named base, rational, or 'coeffs@lo,hi'")
    c.add_argument("--x", required=True, help="one, zero, y:<j>, z:<j>, pi:<pre|per>, rational, or 'num/den'")
    c.add_argument("--depth", type=int)
    c.add_argument("--format", choices=("text", "json"), default="text")
    c.set_defaults(func=cmd_classify)

    t = sub.add_parser("tables", help="recompute the printed tables")
    t.add_argument("--which", type=int, choices=(1, 2, 3), required=True)
    t.add_argument("--format", choices=("text", "json", "csv"), default="text")
    t.set_defaults(func=cmd_tables)

    s = sub.add_parser("search", help="bases with countably many expansions of some special point")
    s.add_argument("--window", help="lo,hi (default: golden ratio to q3)")
    s.add_argument("--depth", type=int)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--format", choices=("text", "json"), default="text")
    s.set_defaults(func=cmd_search)

    v = sub.add_parser("certify", help="run the exact certifications")
    v.add_argument("--theorem", choices=THEOREMS, default="all")
    v.add_argument("--K", type=int, default=50, help="loops checked for the expansions of 1 at q3")
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.add_argument("--verbose", action="store_true")
    v.set_defaults(func=cmd_certify)

    b = sub.add_parser("tree", help="branching tree of a point")
    b.add_argument("--q", required=True)
    b.add_argument("--x", required=True)
    b.add_argument("--depth", type=int, default=12)
    b.add_argument("--format", choices=("text", "json"), default="text")
    b.set_defaults(func=cmd_tree)
    return p


_VALUE_OPTIONS = ("--poly", "--window", "--q", "--x")


def _join_values(argv: list[str]) -> list[str]:
    # values such as "-1,-1,1" start with '-' and would be read as options
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in _VALUE_OPTIONS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
        else:
            out.append(a)
            i += 1
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_join_values(argv))
    try:
        code, text = args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    sys.stdout.write(text if text.endswith("\n") else text + "\n")
    return code


if __name__ == "__main__":
    raise SystemExit(main())
