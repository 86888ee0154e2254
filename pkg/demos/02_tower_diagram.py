"""Render the two-row diagram of a shallow tower as graph text.

The JSON document is the authoritative serialization; the DOT text is a
pure function of it, so regenerating the graph from a parsed document
reproduces the bytes exactly.  Run with --out to write the DOT file for
graphviz, or without to inspect it on stdout.
"""

import argparse
import json

from ahtower import (
    build_connecting_map,
    build_stage,
    diagram_from_json_obj,
    export_diagram,
    render_dot,
    tables_from_cli,
)


def describe_stages(tables):
    for n in range(tables.depth + 1):
        stage = build_stage(tables, n)
        c, b = stage.c_block, stage.b_block
        print(f"  level {n}: C row {c.components} x M_{c.matrix_size} "
              f"over a {c.base_dimension}-dimensional base, "
              f"B row M_{b.matrix_size} "
              f"over a {b.base_dimension}-dimensional base")


def describe_maps(tables):
    for n in range(tables.depth):
        cmap = build_connecting_map(tables, n)
        rows = cmap.multiplicity.as_nested()
        print(f"  map {n}->{n + 1}: multiplicity {rows}, "
              f"column totals all equal l({n + 1}) = {tables.l(n + 1)}")


def main():
    parser = argparse.ArgumentParser(
        description="export the merged diagram of a small tower")
    parser.add_argument("--r", default="1/2")
    parser.add_argument("--r-prime", default="1/3")
    parser.add_argument("--d", type=int, default=1)
    parser.add_argument("--depth", type=int, default=3)
    parser.add_argument("--out", help="write DOT here instead of stdout")
    args = parser.parse_args()

    tables = tables_from_cli(args.r, args.r_prime, args.d, args.depth)
    print("stages:")
    describe_stages(tables)
    print("connecting maps:")
    describe_maps(tables)

    document = export_diagram(tables, fmt="json")
    reparsed = diagram_from_json_obj(json.loads(document))
    dot = render_dot(reparsed)
    assert dot == export_diagram(tables, fmt="dot")

    if args.out:
        with open(args.out, "w") as handle:
            handle.write(dot + "\n")
        print(f"wrote {args.out}")
    else:
        print()
        print(dot)


if __name__ == "__main__":
    main()
