"""Independent recomputation of the governing sequences for the tests.

Deliberately shares no code with the package: minimal-k choices are made by
a literal unit-step scan while the answer is small, switching to galloping
plus bisection on the monotone predicate once the scan cap is passed, and
in both cases the boundary pair (predicate true at k, false at k-1) is
certified before the value is accepted.
"""

from __future__ import annotations

from fractions import Fraction

SCAN_CAP = 4096


def least_true(pred, scan_cap: int = SCAN_CAP) -> int:
    """Least positive integer where the monotone predicate turns true."""
    for k in range(1, scan_cap + 1):
        if pred(k):
            assert k == 1 or not pred(k - 1), "predicate not monotone at boundary"
            return k
    lo, hi = scan_cap, 2 * scan_cap
    while not pred(hi):
        lo, hi = hi, hi * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if pred(mid):
            hi = mid
        else:
            lo = mid
    assert pred(hi) and not pred(hi - 1)
    return hi


def primary_tables(kappa: Fraction, d: int, depth: int,
                   scan_cap: int = SCAN_CAP):
    """Recompute d(n), l(n), r(n), s(n), ratio(n) from the definitions."""
    d_seq, l_seq, r_prod, s_prod = [0], [1], [1], [1]
    ratio = [Fraction(1)]
    for n in range(1, depth + 1):
        pad = 1 + 2 ** (d * n - d)
        target = kappa / ratio[n - 1]
        dn = least_true(lambda k: Fraction(k, k + pad) > target, scan_cap)
        d_seq.append(dn)
        l_seq.append(dn + pad)
        r_prod.append(r_prod[-1] * (dn + pad))
        s_prod.append(s_prod[-1] * dn)
        ratio.append(ratio[-1] * Fraction(dn, dn + pad))
    return d_seq, l_seq, r_prod, s_prod, ratio


def secondary_tables(kappa: Fraction, kappa_prime: Fraction,
                     d_seq, l_seq, ratio, depth: int,
                     scan_cap: int = SCAN_CAP):
    """Recompute d'(n), s'(n), gamma(n) from the definitions."""
    d_prime, s_prime, gamma = [0], [1], [Fraction(1)]
    for n in range(1, depth + 1):
        if kappa_prime == kappa:
            m = d_seq[n]
        else:
            rho_n = kappa / ratio[n]
            step = gamma[n - 1] * rho_n / l_seq[n]
            m = least_true(lambda k: k * step >= kappa_prime, scan_cap)
        d_prime.append(m)
        s_prime.append(s_prime[-1] * m)
        gamma.append(gamma[-1] * Fraction(m, l_seq[n]))
    return d_prime, s_prime, gamma
