import time
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ahtower.comparison import (ProjectionSymbol, SquareZeroPoly,
                                chern_min_embedding_rank, find_witness,
                                projection_pair, rank_obstruction_check,
                                rank_obstruction_threshold, stage_rc_upper)
from ahtower.rational import ExtendedRational
from ahtower.sequences import TargetParams, build_tables


def tables_for(r, rp, d=1, depth=4):
    return build_tables(
        TargetParams(ExtendedRational.parse(r), ExtendedRational.parse(rp), d),
        depth)


@pytest.fixture(scope="module")
def half_third():
    return tables_for("1/2", "1/3")


# ----------------------------------------------------------------------
# the square-zero ring
# ----------------------------------------------------------------------

def test_ring_basics():
    one = SquareZeroPoly.one(3)
    assert one.is_one
    x1 = SquareZeroPoly.linear(3, 1)
    x2 = SquareZeroPoly.linear(3, 2)
    prod = x1.mul(x2)
    assert prod.terms == ((0b011, 1),)
    assert prod.top_degree() == 2
    assert x1.add(x1).coefficient(0b001) == 2


def test_squares_vanish():
    for k in (1, 2, 5):
        for i in range(1, k + 1):
            x = SquareZeroPoly.linear(k, i)
            assert x.mul(x).terms == ()


def test_ring_rejects():
    with pytest.raises(ValueError):
        SquareZeroPoly.linear(3, 4)
    with pytest.raises(ValueError):
        SquareZeroPoly.linear(3, 0)
    with pytest.raises(ValueError):
        SquareZeroPoly.from_dict(2, {0b100: 1})
    with pytest.raises(ValueError):
        SquareZeroPoly.from_dict(2, {}).top_degree()


def test_cancellation_drops_terms():
    x1 = SquareZeroPoly.linear(2, 1)
    assert x1.add(SquareZeroPoly.linear(2, 1, -1)).terms == ()


@given(st.integers(min_value=1, max_value=6), st.data())
@settings(max_examples=60, deadline=None)
def test_ring_multiplication_commutes(k, data):
    coeffs = st.dictionaries(st.integers(min_value=0, max_value=(1 << k) - 1),
                             st.integers(min_value=-4, max_value=4),
                             max_size=5)
    a = SquareZeroPoly.from_dict(k, data.draw(coeffs))
    b = SquareZeroPoly.from_dict(k, data.draw(coeffs))
    assert a.mul(b) == b.mul(a)


def test_chern_rank_doubles():
    for k in range(1, 11):
        assert chern_min_embedding_rank(k) == 2 * k


def test_chern_is_fast():
    start = time.monotonic()
    for k in range(1, 11):
        chern_min_embedding_rank(k)
    assert time.monotonic() - start < 1.0


def test_chern_rejects_bad_k():
    with pytest.raises(ValueError):
        chern_min_embedding_rank(0)
    with pytest.raises(ValueError):
        chern_min_embedding_rank(-3)


def test_inverse_class_top_coefficient():
    # the obstruction read off inside chern_min_embedding_rank, by hand
    k = 4
    inverse = SquareZeroPoly.one(k)
    for i in range(1, k + 1):
        inverse = inverse.mul(SquareZeroPoly.one(k).add(
            SquareZeroPoly.linear(k, i, -1)))
    assert inverse.coefficient((1 << k) - 1) == 1
    inverse5 = SquareZeroPoly.one(5)
    for i in range(1, 6):
        inverse5 = inverse5.mul(SquareZeroPoly.one(5).add(
            SquareZeroPoly.linear(5, i, -1)))
    assert inverse5.coefficient((1 << 5) - 1) == -1


# ----------------------------------------------------------------------
# projection symbols
# ----------------------------------------------------------------------

def test_projection_pair_example(half_third):
    sym = projection_pair(half_third, m=2, n=0)
    assert sym == ProjectionSymbol(origin=0, stage=2, c_nontrivial_rank=48,
                                   c_trivial_rank=47, b_trivial_rank=95)
    assert sym.total_rank == 95
    assert sym.trace_value(half_third.r(2)) == 1


def test_projection_pair_deeper_origin(half_third):
    sym = projection_pair(half_third, m=3, n=1)
    # h(1) s(1) r(3) = 3 * 45695, patterned part h(1) s(3) = 22848
    assert sym.total_rank == 3 * 45695
    assert sym.c_nontrivial_rank == 22848
    assert sym.b_trivial_rank == sym.total_rank


def test_projection_pair_range_errors(half_third):
    with pytest.raises(ValueError):
        projection_pair(half_third, m=1, n=2)
    with pytest.raises(ValueError):
        projection_pair(half_third, m=9, n=0)


def test_rank_threshold_example(half_third):
    assert rank_obstruction_threshold(half_third, m=2, n=0) == 143
    assert rank_obstruction_check(half_third, 2, 0, 143)
    assert not rank_obstruction_check(half_third, 2, 0, 142)


def test_threshold_exceeds_total_rank(half_third):
    # absorbing the pattern always costs strictly more than the pair rank
    for n in range(half_third.depth + 1):
        for m in range(n, half_third.depth + 1):
            sym = projection_pair(half_third, m, n)
            assert rank_obstruction_threshold(half_third, m, n) \
                == sym.total_rank + sym.c_nontrivial_rank


# ----------------------------------------------------------------------
# stage bounds and the witness wrapper
# ----------------------------------------------------------------------

def test_stage_upper_is_h_times_ratio(half_third):
    for n in range(half_third.depth + 1):
        assert stage_rc_upper(half_third, n) == half_third.ratio(n)
    assert stage_rc_upper(half_third, 1) == Fraction(3, 5)


def test_stage_upper_decreases_to_target(half_third):
    r = half_third.params.r.finite_value
    values = [stage_rc_upper(half_third, n)
              for n in range(half_third.depth + 1)]
    assert all(a > b for a, b in zip(values, values[1:]))
    assert all(v > r for v in values)


def test_stage_upper_uses_larger_row():
    t = tables_for("inf", "5/2", depth=3)
    for n in range(t.depth + 1):
        c_row = Fraction(t.h(n) * t.s(n), t.r(n))
        b_row = Fraction(t.h_prime(n) * t.s_prime(n), t.r(n))
        assert stage_rc_upper(t, n) == max(c_row, b_row)


def test_find_witness_wraps_search(half_third):
    rep = find_witness(half_third, Fraction(1, 4))
    assert (rep.n, rep.M) == (1, 7)
    assert rep.crossed is False
    assert rep.all_hold
