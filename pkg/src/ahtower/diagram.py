"""Serialized views of the tower: a JSON document and a DOT drawing.

The document freezes a contiguous band of levels: one stage entry per
level with the component counts and block sizes, and one map entry per
gap carrying the full arrow lists (split by target row) together with
the block multiplicity matrix.  Parsing the emitted JSON reproduces the
document exactly, and the DOT drawing is a pure function of the
document, so the drawing regenerated from a parsed file matches the one
drawn from the original tables.

Node identifiers are stable: C_{n}_{k} for the lattice component whose
point has index k in lexicographic enumeration, B_{n} for the merged
row.  Coordinate-projection edges use the doubled-line style
(color="black:invis:black"); every evaluation edge is dotted.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

from .rational import ints_from_json, ints_to_json
from .sequences import FORMAT_VERSION, GrowthTables, TargetParams
from .tower import (BLOCK_B, BLOCK_C, KIND_COORD_PROJECTION,
                    KIND_POINT_EVAL_X, KIND_POINT_EVAL_Y, KIND_STAR_EVAL,
                    STAR, Arrow, ArrowSpan, BlockMatrix, TorusSlot,
                    build_connecting_map, build_stage, torus_lattice)


# ----------------------------------------------------------------------
# document model
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class DiagramStage:
    level: int
    c_components: int
    c_matrix_size: int
    c_base_dimension: int
    b_matrix_size: int
    b_base_dimension: int


@dataclass(frozen=True)
class TargetArrows:
    """Everything one target row receives from one connecting map."""

    arrows: tuple[Arrow, ...]
    spans: tuple[ArrowSpan, ...]


@dataclass(frozen=True)
class DiagramMap:
    level: int                    # the map climbs from level to level + 1
    d_next: int
    d_prime_next: int
    multiplicity: BlockMatrix
    into_c: TargetArrows
    into_b: TargetArrows


@dataclass(frozen=True)
class DiagramDocument:
    params: TargetParams
    h_rule: str
    h_override: tuple[int, ...] | None
    lo: int
    hi: int
    stages: tuple[DiagramStage, ...]
    maps: tuple[DiagramMap, ...]


def build_diagram_document(tables: GrowthTables, lo: int = 0,
                           hi: int | None = None) -> DiagramDocument:
    hi = tables.depth if hi is None else hi
    if not 0 <= lo <= hi <= tables.depth:
        raise ValueError(f"bad level band [{lo}, {hi}] for depth {tables.depth}")
    stages = []
    for n in range(lo, hi + 1):
        spec = build_stage(tables, n)
        stages.append(DiagramStage(
            level=n,
            c_components=spec.c_block.components,
            c_matrix_size=spec.c_block.matrix_size,
            c_base_dimension=spec.c_block.base_dimension,
            b_matrix_size=spec.b_block.matrix_size,
            b_base_dimension=spec.b_block.base_dimension))
    maps = []
    for n in range(lo, hi):
        cmap = build_connecting_map(tables, n)
        maps.append(DiagramMap(
            level=n,
            d_next=tables.d(n + 1),
            d_prime_next=tables.d_prime(n + 1),
            multiplicity=cmap.multiplicity,
            into_c=TargetArrows(tuple(cmap.arrows_into(BLOCK_C)),
                                tuple(cmap.spans_into(BLOCK_C))),
            into_b=TargetArrows(tuple(cmap.arrows_into(BLOCK_B)),
                                tuple(cmap.spans_into(BLOCK_B)))))
    override = tables.h_seq[:hi + 1] if tables.h_rule == "explicit" else None
    return DiagramDocument(params=tables.params, h_rule=tables.h_rule,
                           h_override=override, lo=lo, hi=hi,
                           stages=tuple(stages), maps=tuple(maps))


# ----------------------------------------------------------------------
# JSON
# ----------------------------------------------------------------------

def _arrow_to_json(arrow: Arrow) -> dict[str, Any]:
    obj: dict[str, Any] = {"source": arrow.source, "kind": arrow.kind}
    if arrow.kind == KIND_POINT_EVAL_X:
        obj["point"] = ints_to_json(arrow.slot.point)
        if arrow.eval_point is not None:
            obj["eval"] = ints_to_json(arrow.eval_point)
    elif arrow.kind != KIND_STAR_EVAL:
        raise ValueError(f"cannot serialize single arrow of kind {arrow.kind}")
    return obj


def _arrow_from_json(obj: Any, target: str) -> Arrow:
    if not isinstance(obj, dict):
        raise ValueError("arrow must be an object")
    kind = obj.get("kind")
    if kind == KIND_STAR_EVAL:
        return Arrow(obj["source"], target, kind, STAR)
    if kind == KIND_POINT_EVAL_X:
        point = tuple(ints_from_json(obj["point"]))
        label = tuple(ints_from_json(obj["eval"])) if "eval" in obj else None
        return Arrow(obj["source"], target, kind, TorusSlot(point), label)
    raise ValueError(f"unknown arrow kind {kind!r}")


def _span_to_json(span: ArrowSpan) -> dict[str, Any]:
    return {"source": span.source, "kind": span.kind,
            "lo": str(span.lo), "hi": str(span.hi)}


def _span_from_json(obj: Any, target: str) -> ArrowSpan:
    if not isinstance(obj, dict):
        raise ValueError("span must be an object")
    if obj.get("kind") not in (KIND_COORD_PROJECTION, KIND_POINT_EVAL_Y):
        raise ValueError(f"unknown span kind {obj.get('kind')!r}")
    return ArrowSpan(obj["source"], target, obj["kind"],
                     int(obj["lo"]), int(obj["hi"]))


def _target_to_json(bucket: TargetArrows) -> dict[str, Any]:
    return {"arrows": [_arrow_to_json(a) for a in bucket.arrows],
            "spans": [_span_to_json(s) for s in bucket.spans]}


def _target_from_json(obj: Any, target: str) -> TargetArrows:
    if not isinstance(obj, dict):
        raise ValueError("target bucket must be an object")
    return TargetArrows(
        tuple(_arrow_from_json(a, target) for a in obj["arrows"]),
        tuple(_span_from_json(s, target) for s in obj["spans"]))


def diagram_to_json_obj(doc: DiagramDocument) -> dict[str, Any]:
    obj: dict[str, Any] = {
        "formatVersion": FORMAT_VERSION,
        "kind": "diagram",
        "params": doc.params.to_json_obj(),
        "hRule": doc.h_rule,
        "depthRange": {"lo": str(doc.lo), "hi": str(doc.hi)},
        "stages": [{
            "level": str(s.level),
            "cComponents": str(s.c_components),
            "cMatrixSize": str(s.c_matrix_size),
            "cBaseDimension": str(s.c_base_dimension),
            "bMatrixSize": str(s.b_matrix_size),
            "bBaseDimension": str(s.b_base_dimension),
        } for s in doc.stages],
        "maps": [{
            "level": str(m.level),
            "dNext": str(m.d_next),
            "dPrimeNext": str(m.d_prime_next),
            "multiplicity": {"cc": str(m.multiplicity.cc),
                             "cb": str(m.multiplicity.cb),
                             "bc": str(m.multiplicity.bc),
                             "bb": str(m.multiplicity.bb)},
            "into": {BLOCK_C: _target_to_json(m.into_c),
                     BLOCK_B: _target_to_json(m.into_b)},
        } for m in doc.maps],
    }
    if doc.h_override is not None:
        obj["hSeqOverride"] = [str(x) for x in doc.h_override]
    return obj


def diagram_from_json_obj(obj: Any) -> DiagramDocument:
    if not isinstance(obj, dict):
        raise ValueError("diagram document must be an object")
    if obj.get("formatVersion") != FORMAT_VERSION:
        raise ValueError(f"unknown formatVersion {obj.get('formatVersion')!r}")
    if obj.get("kind") != "diagram":
        raise ValueError(f"not a diagram document: kind={obj.get('kind')!r}")
    params = TargetParams.from_json_obj(obj["params"])
    rng = obj["depthRange"]
    lo, hi = int(rng["lo"]), int(rng["hi"])
    stages = tuple(DiagramStage(
        level=int(s["level"]),
        c_components=int(s["cComponents"]),
        c_matrix_size=int(s["cMatrixSize"]),
        c_base_dimension=int(s["cBaseDimension"]),
        b_matrix_size=int(s["bMatrixSize"]),
        b_base_dimension=int(s["bBaseDimension"]),
    ) for s in obj["stages"])
    maps = tuple(DiagramMap(
        level=int(m["level"]),
        d_next=int(m["dNext"]),
        d_prime_next=int(m["dPrimeNext"]),
        multiplicity=BlockMatrix(cc=int(m["multiplicity"]["cc"]),
                                 cb=int(m["multiplicity"]["cb"]),
                                 bc=int(m["multiplicity"]["bc"]),
                                 bb=int(m["multiplicity"]["bb"])),
        into_c=_target_from_json(m["into"][BLOCK_C], BLOCK_C),
        into_b=_target_from_json(m["into"][BLOCK_B], BLOCK_B),
    ) for m in obj["maps"])
    if [s.level for s in stages] != list(range(lo, hi + 1)):
        raise ValueError("stage levels must run contiguously over the band")
    if [m.level for m in maps] != list(range(lo, hi)):
        raise ValueError("map levels must run contiguously over the band")
    override = None
    if "hSeqOverride" in obj:
        override = tuple(int(x) for x in obj["hSeqOverride"])
    return DiagramDocument(params=params, h_rule=obj["hRule"],
                           h_override=override, lo=lo, hi=hi,
                           stages=stages, maps=maps)


# ----------------------------------------------------------------------
# DOT
# ----------------------------------------------------------------------

def lattice_index(point: tuple[int, ...], size: int) -> int:
    """Position of a lattice point in lexicographic enumeration order."""
    index = 0
    for coordinate in point:
        if not 0 <= coordinate < size:
            raise ValueError(f"coordinate {coordinate} outside [0, {size})")
        index = index * size + coordinate
    return index


PROJECTION_STYLE = 'color="black:invis:black"'
EVAL_STYLE = "style=dotted"


def render_dot(doc: DiagramDocument) -> str:
    """Draw the document; deterministic line order, stable node ids."""
    d = doc.params.d
    out = ["digraph tower {",
           "  rankdir=LR;",
           "  node [shape=box, fontsize=10];"]
    for stage in doc.stages:
        n = stage.level
        out.append(f"  subgraph cluster_L{n}_C {{")
        out.append(f'    label="level {n} C row";')
        for k, z in enumerate(torus_lattice(d, n)):
            zs = ",".join(str(c) for c in z)
            out.append(f'    C_{n}_{k} [label="z=({zs})\\n'
                       f'M={stage.c_matrix_size}"];')
        out.append("  }")
        out.append(f"  subgraph cluster_L{n}_B {{")
        out.append(f'    label="level {n} B row";')
        out.append(f'    B_{n} [label="M={stage.b_matrix_size}"];')
        out.append("  }")
    for dmap in doc.maps:
        n = dmap.level
        size = 2 ** n
        for k_t, w in enumerate(torus_lattice(d, n + 1)):
            parent = lattice_index(tuple(c % size for c in w), size)
            for span in dmap.into_c.spans:
                out.append(f"  C_{n}_{parent} -> C_{n + 1}_{k_t} "
                           f'[{PROJECTION_STYLE}, label="x{span.count}"];')
            for arrow in dmap.into_c.arrows:
                if arrow.kind == KIND_POINT_EVAL_X:
                    k_s = lattice_index(arrow.slot.point, size)
                    out.append(f"  C_{n}_{k_s} -> C_{n + 1}_{k_t} "
                               f"[{EVAL_STYLE}];")
                else:
                    out.append(f"  B_{n} -> C_{n + 1}_{k_t} [{EVAL_STYLE}];")
        for arrow in dmap.into_b.arrows:
            if arrow.kind == KIND_POINT_EVAL_X:
                k_s = lattice_index(arrow.slot.point, size)
                out.append(f"  C_{n}_{k_s} -> B_{n + 1} [{EVAL_STYLE}];")
            else:
                out.append(f"  B_{n} -> B_{n + 1} [{EVAL_STYLE}];")
        for span in dmap.into_b.spans:
            if span.kind == KIND_COORD_PROJECTION:
                out.append(f"  B_{n} -> B_{n + 1} "
                           f'[{PROJECTION_STYLE}, label="x{span.count}"];')
            else:
                out.append(f"  B_{n} -> B_{n + 1} "
                           f'[{EVAL_STYLE}, label="x{span.count}"];')
    out.append("}")
    return "\n".join(out) + "\n"


# ----------------------------------------------------------------------
# entry point
# ----------------------------------------------------------------------

def export_diagram(tables: GrowthTables, lo: int = 0, hi: int | None = None,
                   fmt: str = "json") -> str:
    """Serialize a band of the tower as JSON text or a DOT drawing."""
    import json

    doc = build_diagram_document(tables, lo, hi)
    if fmt == "json":
        return json.dumps(diagram_to_json_obj(doc), sort_keys=True, indent=2)
    if fmt == "dot":
        return render_dot(doc)
    raise ValueError(f"unknown format {fmt!r}")
