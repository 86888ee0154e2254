"""Exact comparison-radius bookkeeping for the tower.

Three ingredients, all in integer or rational arithmetic:

  * a tiny characteristic-class computation in Z[x_1..x_k]/(x_i^2 = 0)
    certifying that the k-fold product of a line bundle with first class
    x_1 + ... + x_k admits no complement below trivial rank 2k (the top
    class of the would-be inverse survives in degree k);
  * the projection symbols of the construction: a patterned projection of
    rank h(n)s(m) plus trivial padding on the C row against an entirely
    trivial projection on the B row, both of total rank h(n)s(n)r(m),
    whose normalized traces agree at h(n)s(n);
  * stage upper bounds max(h(n)s(n), h'(n)s'(n))/r(n) and the canonical
    lower-bound witness search (see ``certificates``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .certificates import WitnessReport, search_witness
from .sequences import GrowthTables


# ----------------------------------------------------------------------
# the square-zero class ring
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class SquareZeroPoly:
    """An element of Z[x_1..x_k]/(x_i^2), one bitmask term per monomial."""

    variables: int
    terms: tuple[tuple[int, int], ...]   # sorted (mask, coefficient) pairs

    @classmethod
    def from_dict(cls, variables: int, coeffs: dict[int, int]) -> "SquareZeroPoly":
        items = tuple(sorted((m, c) for m, c in coeffs.items() if c != 0))
        if any(m >> variables for m, _ in items):
            raise ValueError("monomial uses a variable out of range")
        return cls(variables, items)

    @classmethod
    def one(cls, variables: int) -> "SquareZeroPoly":
        return cls.from_dict(variables, {0: 1})

    @classmethod
    def linear(cls, variables: int, index: int, coefficient: int = 1
               ) -> "SquareZeroPoly":
        """coefficient * x_index, indices counted from 1."""
        if not 1 <= index <= variables:
            raise ValueError(f"variable index {index} out of range")
        return cls.from_dict(variables, {1 << (index - 1): coefficient})

    def add(self, other: "SquareZeroPoly") -> "SquareZeroPoly":
        out = dict(self.terms)
        for m, c in other.terms:
            out[m] = out.get(m, 0) + c
        return SquareZeroPoly.from_dict(self.variables, out)

    def mul(self, other: "SquareZeroPoly") -> "SquareZeroPoly":
        out: dict[int, int] = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                if m1 & m2:
                    continue   # a square of some x_i, hence zero
                out[m1 | m2] = out.get(m1 | m2, 0) + c1 * c2
        return SquareZeroPoly.from_dict(self.variables, out)

    @property
    def is_one(self) -> bool:
        return self.terms == ((0, 1),)

    def coefficient(self, mask: int) -> int:
        return dict(self.terms).get(mask, 0)

    def top_degree(self) -> int:
        """Highest number of variables in a surviving monomial."""
        if not self.terms:
            raise ValueError("the zero element has no top degree")
        return max(bin(m).count("1") for m, _ in self.terms)


def chern_min_embedding_rank(k: int) -> int:
    """Least trivial rank into which the k-fold line-bundle product embeds.

    Builds the total class prod(1 + x_i) and its inverse prod(1 - x_i),
    certifies their product is exactly 1, and reads off that the inverse
    survives in top degree k with coefficient (-1)^k; a complement inside
    trivial rank N would need the inverse to vanish above degree N - k,
    so N = 2k is the least possibility.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    total = SquareZeroPoly.one(k)
    inverse = SquareZeroPoly.one(k)
    for i in range(1, k + 1):
        total = total.mul(SquareZeroPoly.one(k).add(SquareZeroPoly.linear(k, i)))
        inverse = inverse.mul(SquareZeroPoly.one(k).add(
            SquareZeroPoly.linear(k, i, -1)))
    if not total.mul(inverse).is_one:
        raise RuntimeError("class inverse failed its defining identity")
    top = inverse.top_degree()
    full_mask = (1 << k) - 1
    if top != k or inverse.coefficient(full_mask) != (-1) ** k:
        raise RuntimeError("top obstruction class degenerated")
    return k + top


# ----------------------------------------------------------------------
# projection symbols and rank thresholds
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class ProjectionSymbol:
    """The distinguished projection pair of origin n evaluated at level m.

    The C-row member is patterned on the k-fold bundle product over
    h(n)s(m) coordinates and padded with a trivial rest; the B-row member
    is entirely trivial of the same total rank.
    """

    origin: int
    stage: int
    c_nontrivial_rank: int
    c_trivial_rank: int
    b_trivial_rank: int

    @property
    def total_rank(self) -> int:
        return self.c_nontrivial_rank + self.c_trivial_rank

    def trace_value(self, matrix_size: int) -> Fraction:
        return Fraction(self.total_rank, matrix_size)


def projection_pair(tables: GrowthTables, m: int, n: int) -> ProjectionSymbol:
    """Build the symbol of origin n at evaluation level m >= n."""
    if not 0 <= n <= m <= tables.depth:
        raise ValueError(f"need 0 <= n <= m <= depth, got n={n} m={m}")
    total = tables.h(n) * tables.s(n) * tables.r(m)
    patterned = tables.h(n) * tables.s(m)
    symbol = ProjectionSymbol(origin=n, stage=m,
                              c_nontrivial_rank=patterned,
                              c_trivial_rank=total - patterned,
                              b_trivial_rank=total)
    if symbol.c_trivial_rank < 0:
        raise RuntimeError("patterned rank exceeded the total rank")
    if symbol.trace_value(tables.r(m)) != tables.h(n) * tables.s(n):
        raise RuntimeError("trace normalization broke")
    return symbol


def rank_obstruction_threshold(tables: GrowthTables, m: int, n: int) -> int:
    """Trivial rank needed to absorb the origin-n symbol at level m."""
    if not 0 <= n <= m <= tables.depth:
        raise ValueError(f"need 0 <= n <= m <= depth, got n={n} m={m}")
    return tables.h(n) * tables.s(n) * tables.r(m) + tables.h(n) * tables.s(m)


def rank_obstruction_check(tables: GrowthTables, m: int, n: int,
                           trivial_rank: int) -> bool:
    """Whether a trivial projection of the given rank absorbs the symbol."""
    return trivial_rank >= rank_obstruction_threshold(tables, m, n)


def stage_rc_upper(tables: GrowthTables, n: int) -> Fraction:
    """Dimension-over-size bound for stage n: the larger row ratio."""
    return max(Fraction(tables.h(n) * tables.s(n), tables.r(n)),
               Fraction(tables.h_prime(n) * tables.s_prime(n), tables.r(n)))


def find_witness(tables: GrowthTables, rho: Fraction) -> WitnessReport:
    """Canonical certificate that rho bounds the tower's radius from below."""
    return search_witness(tables, rho, crossed=False)
