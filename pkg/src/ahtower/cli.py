"""Command-line surface: plan, verify, witness, chern, export.

Exit codes: 0 on success, 2 on usage or precondition problems (bad
targets, rho out of range, no witness at the requested depth), 3 when a
verification check fails.  All numeric inputs are exact-rational
strings; output JSON uses sorted keys so identical configurations print
identical bytes.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .action import check_equivariance
from .certificates import search_witness, verify_witness_json
from .comparison import chern_min_embedding_rank
from .crossed import check_crossed_sizes, check_upper_bound_gap
from .diagram import (build_diagram_document, diagram_from_json_obj,
                      diagram_to_json_obj, export_diagram, render_dot)
from .rational import parse_fraction
from .report import Checker, CheckReport
from .sequences import (GrowthTables, build_tables, tables_from_cli,
                        verify_tables)
from .tower import build_connecting_map, verify_tower

EQUIVARIANCE_CAP = 1 << 16


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ahtower",
        description="Exact finite-stage workbench for a tower of "
                    "matrix-algebra stages with a lattice shift action.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_target_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--r", default="1/2",
                       help="target radius, a rational like 3/4 or inf")
        p.add_argument("--r-prime", default=None,
                       help="transformed-side target radius; defaults to --r")
        p.add_argument("--d", type=int, default=1, help="lattice rank")
        p.add_argument("--depth", type=int, default=4,
                       help="number of levels to materialize")
        p.add_argument("--c", default=None,
                       help="ratio limit when both radii are inf "
                            "(default 1/2)")
        p.add_argument("--h-seq", default=None,
                       help="explicit comma-separated h sequence of length "
                            "depth+1 (growing regimes only)")
        p.add_argument("--out", default=None,
                       help="write output here instead of stdout")

    p_plan = sub.add_parser("plan", help="emit the growth tables as JSON")
    add_target_flags(p_plan)
    p_plan.set_defaults(func=cmd_plan)

    p_verify = sub.add_parser(
        "verify", help="run every invariant suite, or re-verify a document")
    add_target_flags(p_verify)
    p_verify.add_argument("file", nargs="?", default=None,
                          help="a previously emitted JSON document "
                               "(tables, witness, or diagram)")
    p_verify.set_defaults(func=cmd_verify)

    p_witness = sub.add_parser(
        "witness", help="search for a canonical certificate for rho")
    add_target_flags(p_witness)
    p_witness.add_argument("--rho", required=True,
                           help="claimed lower bound, a positive rational")
    p_witness.add_argument("--crossed", action="store_true",
                           help="certify the shift-transformed tower instead")
    p_witness.set_defaults(func=cmd_witness)

    p_chern = sub.add_parser(
        "chern", help="table of minimal trivial embedding ranks")
    p_chern.add_argument("--k", type=int, required=True,
                         help="largest bundle-product exponent to tabulate")
    p_chern.add_argument("--out", default=None)
    p_chern.set_defaults(func=cmd_chern)

    p_export = sub.add_parser(
        "export", help="serialize the diagram as JSON or DOT")
    add_target_flags(p_export)
    p_export.add_argument("--format", choices=("json", "dot"),
                          default="json")
    p_export.set_defaults(func=cmd_export)

    return parser


def tables_from_args(args: argparse.Namespace) -> GrowthTables:
    r_prime = args.r if args.r_prime is None else args.r_prime
    return tables_from_cli(args.r, r_prime, args.d, args.depth,
                           c=args.c, h_seq=args.h_seq)


def emit(text: str, out: str | None) -> None:
    if out is None:
        print(text)
    else:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")


# ----------------------------------------------------------------------
# subcommands
# ----------------------------------------------------------------------

def cmd_plan(args: argparse.Namespace) -> int:
    tables = tables_from_args(args)
    emit(json.dumps(tables.to_json_obj(), sort_keys=True, indent=2),
         args.out)
    return 0


def cmd_witness(args: argparse.Namespace) -> int:
    tables = tables_from_args(args)
    report = search_witness(tables, parse_fraction(args.rho),
                            crossed=args.crossed)
    emit(json.dumps(report.to_json_obj(), sort_keys=True, indent=2),
         args.out)
    return 0


def cmd_chern(args: argparse.Namespace) -> int:
    if args.k < 1:
        raise ValueError("--k must be a positive integer")
    doc = {"formatVersion": "1", "kind": "chern", "maxK": str(args.k),
           "ranks": [str(chern_min_embedding_rank(k))
                     for k in range(1, args.k + 1)]}
    emit(json.dumps(doc, sort_keys=True, indent=2), args.out)
    return 0


def cmd_export(args: argparse.Namespace) -> int:
    tables = tables_from_args(args)
    emit(export_diagram(tables, 0, tables.depth, args.format).rstrip("\n"),
         args.out)
    return 0


# ----------------------------------------------------------------------
# verify
# ----------------------------------------------------------------------

def standard_generators(d: int) -> list[tuple[int, ...]]:
    basis = [tuple(1 if i == j else 0 for i in range(d)) for j in range(d)]
    diagonal = (1,) * d
    if diagonal not in basis:
        basis.append(diagonal)
    return basis


def equivariance_report(tables: GrowthTables,
                        cap: int = EQUIVARIANCE_CAP) -> CheckReport:
    c = Checker()
    for n in range(tables.depth):
        if tables.torus_points(n) > cap:
            c.check(f"map {n} equivariance skipped (census above cap)", True)
            continue
        cmap = build_connecting_map(tables, n)
        for g in standard_generators(tables.params.d):
            c.merge(check_equivariance(cmap, g), prefix=f"g={g} ")
    return c.report()


def chern_report(max_k: int = 6) -> CheckReport:
    c = Checker()
    for k in range(1, max_k + 1):
        c.check(f"minimal embedding rank doubles (k={k})",
                chern_min_embedding_rank(k) == 2 * k)
    return c.report()


def run_suites(tables: GrowthTables) -> list[tuple[str, CheckReport]]:
    suites = [
        ("tables", verify_tables(tables)),
        ("tower", verify_tower(tables)),
        ("action", equivariance_report(tables)),
        ("crossed sizes", check_crossed_sizes(tables)),
    ]
    if not tables.params.r_prime.is_infinite:
        suites.append(("crossed bounds", check_upper_bound_gap(tables)))
    suites.append(("chern", chern_report()))
    return suites


def report_lines(label: str, report: CheckReport) -> tuple[bool, str]:
    if report.ok:
        return True, f"{label}: {len(report.entries)} checks pass"
    failure = report.first_failure
    detail = f" ({failure.detail})" if failure.detail else ""
    return False, f"invariant violated: {failure.name}{detail}"


def cmd_verify(args: argparse.Namespace) -> int:
    if args.file is not None:
        return verify_document_file(args.file, args.out)
    tables = tables_from_args(args)
    lines = []
    for label, report in run_suites(tables):
        ok, line = report_lines(label, report)
        if not ok:
            emit(line, args.out)
            return 3
        lines.append(line)
    lines.append("all checks pass")
    emit("\n".join(lines), args.out)
    return 0


def verify_document_file(path: str, out: str | None) -> int:
    with open(path, "r", encoding="utf-8") as handle:
        text = handle.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        emit(f"invariant violated: document parses ({exc})", out)
        return 3
    kind = obj.get("kind") if isinstance(obj, dict) else None
    if kind == "tables":
        return verify_tables_document(obj, out)
    if kind == "witness":
        report = verify_witness_json(obj)
        ok, line = report_lines("witness certificate", report)
        emit(line, out)
        return 0 if ok else 3
    if kind == "diagram":
        return verify_diagram_document(obj, out)
    emit(f"invariant violated: recognized document kind (got {kind!r})", out)
    return 3


def verify_tables_document(obj: dict, out: str | None) -> int:
    try:
        tables = GrowthTables.from_json_obj(obj)
        rebuilt = build_tables(
            tables.params, tables.depth,
            tables.h_seq if tables.h_rule == "explicit" else None)
    except (KeyError, ValueError, TypeError) as exc:
        emit(f"invariant violated: tables document well formed ({exc})", out)
        return 3
    report = verify_tables(tables)
    ok, line = report_lines("tables", report)
    if not ok:
        emit(line, out)
        return 3
    if tables.to_json_obj() != rebuilt.to_json_obj():
        emit("invariant violated: tables match canonical regeneration", out)
        return 3
    emit(line + "\ntables match canonical regeneration", out)
    return 0


def verify_diagram_document(obj: dict, out: str | None) -> int:
    try:
        doc = diagram_from_json_obj(obj)
        tables = build_tables(doc.params, doc.hi, doc.h_override)
        rebuilt = build_diagram_document(tables, doc.lo, doc.hi)
    except (KeyError, ValueError, TypeError) as exc:
        emit(f"invariant violated: diagram document well formed ({exc})", out)
        return 3
    if diagram_to_json_obj(doc) != diagram_to_json_obj(rebuilt):
        emit("invariant violated: diagram matches canonical regeneration",
             out)
        return 3
    if render_dot(doc) != render_dot(rebuilt):
        emit("invariant violated: drawing matches canonical regeneration",
             out)
        return 3
    emit("diagram matches canonical regeneration", out)
    return 0


# ----------------------------------------------------------------------
# entry point
# ----------------------------------------------------------------------

def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
