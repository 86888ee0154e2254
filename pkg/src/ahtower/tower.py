"""Stages of the recursive tower and the maps that connect them.

Stage n holds two homogeneous blocks over products of 2-spheres:

  * the C row: 2^(nd) matrix components of size r(n) over a base of real
    dimension 2*h(n)*s(n), indexed by the order-2^n lattice points
    Z_{2^n}^d;
  * the B row: one component of size r(n) over a base of dimension
    2*h'(n)*s'(n).

The map into stage n+1 is described slot by slot against the index set

    L(n+1) = Z_{2^n}^d  |_|  {star}  |_|  {1, ..., d(n+1)}

of size l(n+1).  Into each target block, every lattice slot z receives a
point evaluation of the C row (labelled by z), the star slot receives a
point evaluation of the B row, and the projection slots receive either
coordinate projections or further point evaluations of the B row:
d(n+1) projections into the C row; into the B row, projections on slots
1..d'(n+1) and point evaluations on the remaining d(n+1)-d'(n+1) slots.

Projection-slot arrows are stored as index spans (lo..hi), never expanded
by default: d(n+1) reaches 10^23 within six levels, so a per-slot list is
representable only at toy depth.  ``expand_arrows`` materializes the slots
when the census is small enough to enumerate.

Multiplicity bookkeeping is a 2x2 integer matrix of (source, target) path
counts whose per-target totals are l(n+1); composing the matrices along
levels m..n gives per-target totals r(n)/r(m).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .report import Checker, CheckReport
from .sequences import GrowthTables

BLOCK_C = "C"
BLOCK_B = "B"

KIND_POINT_EVAL_X = "pointEvalX"
KIND_POINT_EVAL_Y = "pointEvalY"
KIND_STAR_EVAL = "starEval"
KIND_COORD_PROJECTION = "coordProjection"

EXPAND_LIMIT = 1 << 20


# ----------------------------------------------------------------------
# slots and arrows
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class TorusSlot:
    """A lattice slot z in Z_{2^n}^d, stored as a tuple of residues."""

    point: tuple[int, ...]


@dataclass(frozen=True)
class StarSlot:
    pass


STAR = StarSlot()


@dataclass(frozen=True)
class ProjSlot:
    index: int


@dataclass(frozen=True)
class Arrow:
    """One slot of a connecting map: source block, target block, kind.

    ``eval_point`` is the lattice label of a point evaluation of the C row;
    it is None for the crossed-product transform, whose fiber evaluations
    happen at the base point alone.
    """

    source: str
    target: str
    kind: str
    slot: TorusSlot | StarSlot | ProjSlot
    eval_point: tuple[int, ...] | None = None


@dataclass(frozen=True)
class ArrowSpan:
    """A run of projection slots lo..hi (inclusive) sharing one arrow kind."""

    source: str
    target: str
    kind: str
    lo: int
    hi: int

    @property
    def count(self) -> int:
        return self.hi - self.lo + 1


# ----------------------------------------------------------------------
# multiplicity bookkeeping
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class BlockMatrix:
    """Path counts between rows, one field per (source, target) pair."""

    cc: int
    cb: int
    bc: int
    bb: int

    @classmethod
    def identity(cls) -> "BlockMatrix":
        return cls(1, 0, 0, 1)

    def then(self, later: "BlockMatrix") -> "BlockMatrix":
        """Counts for this step followed by ``later``."""
        return BlockMatrix(
            cc=self.cc * later.cc + self.cb * later.bc,
            cb=self.cc * later.cb + self.cb * later.bb,
            bc=self.bc * later.cc + self.bb * later.bc,
            bb=self.bc * later.cb + self.bb * later.bb)

    def into_totals(self) -> dict[str, int]:
        """Total source blocks absorbed by each target row."""
        return {BLOCK_C: self.cc + self.bc, BLOCK_B: self.cb + self.bb}

    def as_nested(self) -> list[list[int]]:
        return [[self.cc, self.cb], [self.bc, self.bb]]

    @classmethod
    def from_nested(cls, rows) -> "BlockMatrix":
        (cc, cb), (bc, bb) = rows
        return cls(int(cc), int(cb), int(bc), int(bb))


def multiplicity_matrix(tables: GrowthTables, level: int) -> BlockMatrix:
    """The (source, target) counts for the map out of ``level``."""
    if not 0 <= level < tables.depth:
        raise ValueError(f"no connecting map out of level {level}")
    pts = tables.torus_points(level)
    d_next = tables.d(level + 1)
    return BlockMatrix(cc=pts + d_next, cb=pts, bc=1, bb=1 + d_next)


def compose_multiplicities(tables: GrowthTables, m: int, n: int) -> BlockMatrix:
    """Ordered product of the per-stage matrices along levels m..n."""
    if not 0 <= m <= n <= tables.depth:
        raise ValueError(f"bad level range [{m}, {n}]")
    acc = BlockMatrix.identity()
    for level in range(m, n):
        acc = acc.then(multiplicity_matrix(tables, level))
    return acc


# ----------------------------------------------------------------------
# stages and maps
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class BlockSpec:
    components: int
    base_dimension: int
    matrix_size: int


@dataclass(frozen=True)
class StageSpec:
    level: int
    c_block: BlockSpec
    b_block: BlockSpec


def build_stage(tables: GrowthTables, n: int) -> StageSpec:
    return StageSpec(
        level=n,
        c_block=BlockSpec(components=tables.torus_points(n),
                          base_dimension=2 * tables.h(n) * tables.s(n),
                          matrix_size=tables.r(n)),
        b_block=BlockSpec(components=1,
                          base_dimension=2 * tables.h_prime(n) * tables.s_prime(n),
                          matrix_size=tables.r(n)))


@dataclass(frozen=True)
class ConnectingMap:
    """Slot-by-slot description of the map from stage ``level`` to the next."""

    level: int
    d: int
    arrows: tuple[Arrow, ...]
    spans: tuple[ArrowSpan, ...]
    multiplicity: BlockMatrix
    crossed: bool = False

    def arrows_into(self, target: str):
        return [a for a in self.arrows if a.target == target]

    def spans_into(self, target: str):
        return [s for s in self.spans if s.target == target]


def torus_lattice(d: int, n: int):
    """All points of Z_{2^n}^d in lexicographic order."""
    return itertools.product(range(2 ** n), repeat=d)


def build_connecting_map(tables: GrowthTables, n: int,
                         crossed: bool = False) -> ConnectingMap:
    if not 0 <= n < tables.depth:
        raise ValueError(f"no connecting map out of level {n}")
    d = tables.params.d
    d_next, dp_next = tables.d(n + 1), tables.d_prime(n + 1)
    arrows: list[Arrow] = []
    spans: list[ArrowSpan] = []
    for target in (BLOCK_C, BLOCK_B):
        for z in torus_lattice(d, n):
            arrows.append(Arrow(BLOCK_C, target, KIND_POINT_EVAL_X,
                                TorusSlot(z), None if crossed else z))
        arrows.append(Arrow(BLOCK_B, target, KIND_STAR_EVAL, STAR))
    spans.append(ArrowSpan(BLOCK_C, BLOCK_C, KIND_COORD_PROJECTION, 1, d_next))
    if dp_next < d_next:
        spans.append(ArrowSpan(BLOCK_B, BLOCK_B, KIND_POINT_EVAL_Y,
                               dp_next + 1, d_next))
    spans.append(ArrowSpan(BLOCK_B, BLOCK_B, KIND_COORD_PROJECTION, 1, dp_next))
    return ConnectingMap(level=n, d=d, arrows=tuple(arrows),
                         spans=tuple(spans),
                         multiplicity=multiplicity_matrix(tables, n),
                         crossed=crossed)


def expand_arrows(cmap: ConnectingMap, target: str) -> list[Arrow]:
    """Materialize every slot arrow into ``target``, spans included."""
    total = len(cmap.arrows_into(target)) + \
        sum(s.count for s in cmap.spans_into(target))
    if total > EXPAND_LIMIT:
        raise ValueError(f"{total} slots will not be expanded (limit {EXPAND_LIMIT})")
    out = list(cmap.arrows_into(target))
    for span in cmap.spans_into(target):
        out.extend(Arrow(span.source, span.target, span.kind, ProjSlot(j))
                   for j in range(span.lo, span.hi + 1))
    return out


# ----------------------------------------------------------------------
# soundness checks
# ----------------------------------------------------------------------

def check_unital(tables: GrowthTables, cmap: ConnectingMap) -> CheckReport:
    """Slot totals, slot coverage, census, and the size recursion."""
    n = cmap.level
    c = Checker()
    l_next = tables.l(n + 1)
    d_next, dp_next = tables.d(n + 1), tables.d_prime(n + 1)
    pts = tables.torus_points(n)
    c.check(f"r({n})*l({n + 1}) = r({n + 1})",
            tables.r(n) * l_next == tables.r(n + 1),
            f"{tables.r(n)}*{l_next}")

    lattice = set(torus_lattice(cmap.d, n))
    for target in (BLOCK_C, BLOCK_B):
        singles = cmap.arrows_into(target)
        spans = cmap.spans_into(target)
        total = len(singles) + sum(s.count for s in spans)
        c.check(f"{target}-target total l({n + 1})", total == l_next,
                f"total {total} vs l({n + 1}) = {l_next}")

        torus_slots = [a.slot.point for a in singles
                       if isinstance(a.slot, TorusSlot)]
        c.check(f"{target}-target lattice slots covered once",
                sorted(torus_slots) == sorted(lattice)
                and len(torus_slots) == len(set(torus_slots)))
        c.check(f"{target}-target star slot covered once",
                sum(1 for a in singles if isinstance(a.slot, StarSlot)) == 1)
        runs = sorted((s.lo, s.hi) for s in spans)
        disjoint = all(a[1] < b[0] for a, b in zip(runs, runs[1:]))
        complete = (not runs) if d_next == 0 else (
            runs[0][0] == 1 and runs[-1][1] == d_next
            and all(a[1] + 1 == b[0] for a, b in zip(runs, runs[1:])))
        c.check(f"{target}-target projection slots covered once",
                disjoint and complete and all(s.lo <= s.hi for s in spans))

        by_kind: dict[str, int] = {}
        for a in singles:
            by_kind[a.kind] = by_kind.get(a.kind, 0) + 1
        for s in spans:
            by_kind[s.kind] = by_kind.get(s.kind, 0) + s.count
        want = {KIND_POINT_EVAL_X: pts, KIND_STAR_EVAL: 1}
        if target == BLOCK_C:
            want[KIND_COORD_PROJECTION] = d_next
        else:
            want[KIND_COORD_PROJECTION] = dp_next
            if d_next > dp_next:
                want[KIND_POINT_EVAL_Y] = d_next - dp_next
        c.check(f"{target}-target census", by_kind == want,
                f"{by_kind} vs {want}")
        c.check(f"{target}-target sources",
                all(a.source == BLOCK_C for a in singles
                    if a.kind == KIND_POINT_EVAL_X)
                and all(a.source == BLOCK_B for a in singles
                        if a.kind == KIND_STAR_EVAL)
                and all(s.source == (BLOCK_C if target == BLOCK_C else BLOCK_B)
                        for s in spans if s.kind == KIND_COORD_PROJECTION)
                and all(s.source == BLOCK_B for s in spans
                        if s.kind == KIND_POINT_EVAL_Y))
        if not cmap.crossed:
            c.check(f"{target}-target evaluation labels",
                    all(a.eval_point == a.slot.point for a in singles
                        if a.kind == KIND_POINT_EVAL_X))

    want_mult = multiplicity_matrix(tables, n)
    c.check("multiplicity matrix matches census",
            cmap.multiplicity == want_mult)
    c.check("multiplicity per-target totals = l",
            set(cmap.multiplicity.into_totals().values()) == {l_next})
    return c.report()


def verify_tower(tables: GrowthTables, arrow_cap: int = 1 << 16) -> CheckReport:
    """Stage shapes, every connecting map, and all composed multiplicities.

    Maps whose lattice census exceeds ``arrow_cap`` points are checked on
    multiplicities only, and the skip is recorded in the report.
    """
    c = Checker()
    for n in range(tables.depth + 1):
        stage = build_stage(tables, n)
        c.check(f"stage {n} shape",
                stage.c_block.components == tables.torus_points(n)
                and stage.b_block.components == 1
                and stage.c_block.matrix_size == stage.b_block.matrix_size
                == tables.r(n)
                and stage.c_block.base_dimension % 2 == 0
                and stage.b_block.base_dimension % 2 == 0)
    for n in range(tables.depth):
        if tables.torus_points(n) > arrow_cap:
            c.check(f"map {n} slot checks skipped (census above cap)", True)
            want = multiplicity_matrix(tables, n)
            c.check(f"map {n} multiplicity totals",
                    set(want.into_totals().values()) == {tables.l(n + 1)})
            continue
        c.merge(check_unital(tables, build_connecting_map(tables, n)),
                prefix=f"map {n}: ")
    for m in range(tables.depth + 1):
        for n in range(m, tables.depth + 1):
            totals = compose_multiplicities(tables, m, n).into_totals()
            want = tables.r(n) // tables.r(m)
            c.check(f"composed totals {m}->{n}",
                    set(totals.values()) == {want}
                    and tables.r(m) * want == tables.r(n))
    return c.report()
