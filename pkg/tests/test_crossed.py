from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ahtower.crossed import (CrossedProjectionSymbol, build_crossed_stage,
                             check_crossed_sizes, check_upper_bound_gap,
                             crossed_connecting_map, crossed_find_witness,
                             crossed_projection_pair, crossed_rank_threshold,
                             crossed_rc_upper, crossed_trace_check)
from ahtower.rational import ExtendedRational
from ahtower.sequences import TargetParams, build_tables
from ahtower.tower import build_connecting_map, multiplicity_matrix


def tables_for(r, rp, d=1, depth=4, c=None):
    kwargs = {}
    if c is not None:
        kwargs["c_infinite"] = Fraction(c)
    return build_tables(
        TargetParams(ExtendedRational.parse(r), ExtendedRational.parse(rp), d,
                     **kwargs),
        depth)


@pytest.fixture(scope="module")
def half_third():
    return tables_for("1/2", "1/3")


# ----------------------------------------------------------------------
# shapes and censuses
# ----------------------------------------------------------------------

def test_crossed_stage_shapes(half_third):
    spec = build_crossed_stage(half_third, 1)
    assert spec.c_tilde.matrix_size == 10          # r(1) * 2^1
    assert spec.c_tilde.base_dimension == 6        # 2 * h(1) * s(1)
    assert spec.b_tilde.matrix_size == 5
    assert spec.b_tilde.base_dimension == 4        # 2 * h'(1) * s'(1)
    assert spec.c_tilde.torus_rank == spec.b_tilde.torus_rank == 1


def test_size_recursion_direct(half_third):
    d = half_third.params.d
    for n in range(half_third.depth):
        assert half_third.r(n + 1) * 2 ** ((n + 1) * d) \
            == half_third.r(n) * 2 ** (n * d) * half_third.l(n + 1) * 2 ** d


def test_crossed_map_matches_tower_census(half_third):
    for n in range(half_third.depth):
        cross = crossed_connecting_map(half_third, n)
        plain = build_connecting_map(half_third, n)
        assert cross.multiplicity == plain.multiplicity \
            == multiplicity_matrix(half_third, n)
        assert cross.spans == plain.spans
        assert len(cross.arrows) == len(plain.arrows)
        assert all(a.eval_point is None for a in cross.arrows)


def test_check_crossed_sizes_green(half_third):
    report = check_crossed_sizes(half_third)
    assert report.ok, report.first_failure
    names = {e.name for e in report.entries}
    assert "size recursion at level 0" in names
    assert "arrow census matches the plain tower at level 3" in names


def test_check_crossed_sizes_respects_cap(half_third):
    report = check_crossed_sizes(half_third, arrow_cap=2)
    assert report.ok
    skipped = [e for e in report.entries if "skipped" in e.name]
    # levels 2 and 3 have 4 and 8 lattice points
    assert len(skipped) == 2


def test_check_crossed_sizes_other_regimes():
    for t in (tables_for("1/2", "1/3", d=2, depth=3),
              tables_for("inf", "5/2", depth=3),
              tables_for("inf", "inf", depth=3, c="1/2")):
        report = check_crossed_sizes(t)
        assert report.ok, report.first_failure


# ----------------------------------------------------------------------
# the swapped projection pair
# ----------------------------------------------------------------------

def test_crossed_projection_pair_example(half_third):
    sym = crossed_projection_pair(half_third, m=2, n=1)
    assert sym == CrossedProjectionSymbol(origin=1, stage=2,
                                          b_nontrivial_rank=32,
                                          b_trivial_rank=158,
                                          c_trivial_rank=760)
    assert sym.b_total_rank == 190
    assert crossed_rank_threshold(half_third, 2, 1) == 190 + 32


def test_crossed_pair_trace_agreement(half_third):
    for n in range(half_third.depth + 1):
        for m in range(n, half_third.depth + 1):
            sym = crossed_projection_pair(half_third, m, n)
            small = Fraction(sym.b_total_rank, half_third.r(m))
            big = Fraction(sym.c_trivial_rank,
                           half_third.r(m) * 2 ** (m * half_third.params.d))
            assert small == big


def test_crossed_pair_range_errors(half_third):
    with pytest.raises(ValueError):
        crossed_projection_pair(half_third, m=0, n=1)
    with pytest.raises(ValueError):
        crossed_rank_threshold(half_third, m=7, n=0)


# ----------------------------------------------------------------------
# upper bounds and the gap identity
# ----------------------------------------------------------------------

def test_rc_upper_frozen_values(half_third):
    b1 = crossed_rc_upper(half_third, 1)
    assert b1.b_part == Fraction(1, 2)
    assert b1.c_part == Fraction(7, 20)
    assert b1.value == Fraction(1, 2)
    b2 = crossed_rc_upper(half_third, 2)
    assert b2.b_part == Fraction(13, 38)
    assert b2.c_part == Fraction(97, 760)


def test_gap_identity_frozen_values(half_third):
    rp = Fraction(1, 3)
    gaps = [crossed_rc_upper(half_third, n).b_part - rp for n in (1, 2, 3)]
    assert gaps == [Fraction(1, 6), Fraction(1, 114), Fraction(1, 54834)]
    # the level-1 excess splits into its two exact contributions
    assert gaps[0] == Fraction(1, 15) + Fraction(1, 10)
    assert half_third.gamma(1) - half_third.kappa_prime == Fraction(1, 15)


def test_gap_identity_exact(half_third):
    rp = half_third.params.r_prime.finite_value
    d = half_third.params.d
    for n in range(1, half_third.depth + 1):
        bound = crossed_rc_upper(half_third, n)
        assert bound.b_part - rp == half_third.h_prime(n) \
            * (half_third.gamma(n) - half_third.kappa_prime) \
            + Fraction(d, 2 * half_third.r(n))


def test_check_upper_bound_gap_green(half_third):
    report = check_upper_bound_gap(half_third)
    assert report.ok, report.first_failure
    names = [e.name for e in report.entries]
    assert "small-row excess identity (n=1)" in names
    assert "big-row part strictly decreasing (n=2)" in names


def test_check_upper_bound_gap_other_targets():
    for t in (tables_for("3/4", "1/4", depth=4),
              tables_for("1/2", "1/2", depth=4),
              tables_for("inf", "5/2", depth=4)):
        report = check_upper_bound_gap(t)
        assert report.ok, report.first_failure


def test_gap_check_needs_finite_primed_radius():
    t = tables_for("inf", "inf", depth=3, c="1/2")
    with pytest.raises(ValueError, match="finite"):
        check_upper_bound_gap(t)


def test_collapsed_targets_tie_the_two_rows():
    # kappa' = kappa makes the big-row part exactly the small-row part
    # divided by the lattice size
    t = tables_for("inf", "inf", depth=4, c="1/2")
    for n in range(t.depth + 1):
        bound = crossed_rc_upper(t, n)
        assert bound.c_part * 2 ** (n * t.params.d) == bound.b_part


# ----------------------------------------------------------------------
# trace pairing
# ----------------------------------------------------------------------

def test_trace_check_frozen_witness(half_third):
    report = crossed_trace_check(half_third, n=2, M=119)
    assert report.ok, report.first_failure
    names = [e.name for e in report.entries]
    assert "weighted trace lambda=1/4 (m=3)" in names
    assert "row traces agree (m=4)" in names


def test_trace_check_custom_weights(half_third):
    report = crossed_trace_check(half_third, n=1, M=7,
                                 lambdas=(Fraction(2, 7),),
                                 depths=(1, 2, 3))
    assert report.ok
    assert len([e for e in report.entries if "weighted" in e.name]) == 3


def test_trace_check_rejects(half_third):
    with pytest.raises(ValueError):
        crossed_trace_check(half_third, n=9, M=1)
    with pytest.raises(ValueError):
        crossed_trace_check(half_third, n=1, M=0)
    with pytest.raises(ValueError):
        crossed_trace_check(half_third, n=2, M=5, depths=(1,))


@given(st.integers(min_value=0, max_value=3),
       st.integers(min_value=1, max_value=500))
@settings(max_examples=40, deadline=None)
def test_trace_check_holds_for_any_block(half_third, n, M):
    assert crossed_trace_check(half_third, n, M).ok


# ----------------------------------------------------------------------
# witnesses
# ----------------------------------------------------------------------

def test_crossed_witness_values(half_third):
    rep = crossed_find_witness(half_third, Fraction(1, 4))
    assert (rep.n, rep.M) == (2, 119)
    assert rep.crossed is True
    assert rep.all_hold
    assert any(r.name == "trace match (m=4)" and r.relation == "="
               for r in rep.ledger)


def test_crossed_witness_precondition(half_third):
    with pytest.raises(ValueError, match="below the target radius"):
        crossed_find_witness(half_third, Fraction(2, 5))
