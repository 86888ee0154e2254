"""Governing integer sequences for the recursive tower.

Everything downstream is driven by one pair of positive integer sequences
(d(n), l(n)) chosen against a rational ratio target kappa in (0,1), plus an
optional second sequence d'(n) chosen against a smaller target kappa'.
The recursion, in exact arithmetic:

    d(1)   = least k with k/(k+2) > kappa
    l(n)   = d(n) + 1 + 2^(d*n - d)          (d = torus rank)
    r_n    = prod_{k<=n} d(k)/l(k)           (running ratio, decreases to kappa)
    d(n)   = least k with k/(k + 1 + 2^(d*n-d)) > kappa/r_{n-1}   for n >= 2

and, when kappa' < kappa, with rho_n = kappa/r_n (exactly, never a truncated
product) and gamma_0 = 1:

    d'(n)  = least m with m * gamma_{n-1} * rho_n / l(n) >= kappa'
    gamma_n = prod_{k<=n} d'(k)/l(k)

The cumulative products r(n) = prod l(k), s(n) = prod d(k) and s'(n) =
prod d'(k) are the matrix sizes and ranks used by every later module.  The
"least k" steps are solved in closed form (the predicates are monotone
linear comparisons), and each solution is certified by checking the
predicate at k and at k-1; these integers reach hundreds of digits within a
dozen levels, so unit-step scanning is not an option here.

Targets come from a triple (r, r', d) of requested comparison radii where
each radius may be "inf":

  * both finite: h = least integer > r, kappa = r/h, kappa' = r'/h,
    and the multiplicity sequences h(n) = h'(n) = h are constant;
  * r infinite, r' finite: h' = least integer > r', kappa = kappa' = r'/h',
    h'(n) = h' constant while h(n) grows;
  * both infinite: kappa = kappa' = a free constant c in (0,1), both h
    sequences grow.

Growing h-sequences default to h(n) = n + 1, which satisfies the three
constraints that matter (h(0) = 1, nondecreasing, h(n)/2^(nd) -> 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .rational import (ExtendedRational, fraction_from_json, fraction_to_json,
                       ints_from_json, ints_to_json, parse_fraction)
from .report import Checker, CheckReport

REGIME_FINITE_FINITE = "finite-finite"
REGIME_INFINITE_FINITE = "infinite-finite"
REGIME_INFINITE_INFINITE = "infinite-infinite"

H_RULE_CONSTANT = "constant"
H_RULE_LINEAR = "linear"
H_RULE_EXPLICIT = "explicit"

DEFAULT_C_INFINITE = Fraction(1, 2)


# ----------------------------------------------------------------------
# parameters and rate targets
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class TargetParams:
    """Requested comparison radii (r for the tower, r' for its quotient by
    the shift action) and the torus rank d of the acting group."""

    r: ExtendedRational
    r_prime: ExtendedRational
    d: int
    c_infinite: Fraction = DEFAULT_C_INFINITE

    def __post_init__(self) -> None:
        if self.d < 1:
            raise ValueError("torus rank d must be a positive integer")
        if not self.r_prime.is_infinite and self.r_prime.finite_value == 0:
            raise ValueError("r' must be positive")
        if self.r_prime > self.r:
            raise ValueError("r' must not exceed r")
        if not (0 < self.c_infinite < 1):
            raise ValueError("c must lie strictly between 0 and 1")

    @property
    def regime(self) -> str:
        if not self.r.is_infinite:
            return REGIME_FINITE_FINITE
        if not self.r_prime.is_infinite:
            return REGIME_INFINITE_FINITE
        return REGIME_INFINITE_INFINITE

    def to_json_obj(self) -> dict[str, Any]:
        obj: dict[str, Any] = {
            "r": self.r.to_json(),
            "rPrime": self.r_prime.to_json(),
            "d": str(self.d),
        }
        if self.regime == REGIME_INFINITE_INFINITE:
            obj["cInfinite"] = fraction_to_json(self.c_infinite)
        return obj

    @classmethod
    def from_json_obj(cls, obj: Any) -> "TargetParams":
        if not isinstance(obj, dict):
            raise ValueError("params must be an object")
        kwargs: dict[str, Any] = {
            "r": ExtendedRational.from_json(obj["r"]),
            "r_prime": ExtendedRational.from_json(obj["rPrime"]),
            "d": int(obj["d"]),
        }
        if "cInfinite" in obj:
            kwargs["c_infinite"] = fraction_from_json(obj["cInfinite"])
        return cls(**kwargs)


def least_integer_above(x: Fraction) -> int:
    """Least integer strictly greater than x."""
    return math.floor(x) + 1


@dataclass(frozen=True)
class RateChoice:
    """Output of derive_kappa: the exact ratio targets and the h rules."""

    regime: str
    kappa: Fraction
    kappa_prime: Fraction
    h_base: int | None        # None means "growing"
    h_prime_base: int | None

    @property
    def h_grows(self) -> bool:
        return self.h_base is None

    @property
    def h_prime_grows(self) -> bool:
        return self.h_prime_base is None


def derive_kappa(params: TargetParams) -> RateChoice:
    """Turn requested radii into exact ratio targets in (0,1).

    A finite radius t is realized as t = kappa * h with h the least integer
    exceeding t, so kappa lands strictly inside (0,1); an infinite radius
    forces the corresponding h-sequence to grow instead.
    """
    regime = params.regime
    if regime == REGIME_FINITE_FINITE:
        r = params.r.finite_value
        h = least_integer_above(r)
        return RateChoice(regime, Fraction(r, h),
                          Fraction(params.r_prime.finite_value, h), h, h)
    if regime == REGIME_INFINITE_FINITE:
        rp = params.r_prime.finite_value
        hp = least_integer_above(rp)
        kappa = Fraction(rp, hp)
        return RateChoice(regime, kappa, kappa, None, hp)
    c = params.c_infinite
    return RateChoice(regime, c, c, None, None)


# ----------------------------------------------------------------------
# certified least-k solvers
# ----------------------------------------------------------------------

def least_k_ratio_exceeds(c: int, target: Fraction) -> int:
    """Least positive integer k with k/(k+c) > target, for 0 < target < 1.

    Solved in closed form from k*(q-p) > c*p and certified at the boundary.
    """
    if not (0 < target < 1):
        raise ValueError("target must lie strictly between 0 and 1")
    p, q = target.numerator, target.denominator
    k = max(1, (c * p) // (q - p) + 1)
    if not Fraction(k, k + c) > target:
        raise RuntimeError("least-k certificate failed high side")
    if k > 1 and Fraction(k - 1, k - 1 + c) > target:
        raise RuntimeError("least-k certificate failed low side")
    return k


def least_m_product_reaches(step: Fraction, target: Fraction) -> int:
    """Least positive integer m with m*step >= target, for positive step."""
    if step <= 0 or target <= 0:
        raise ValueError("step and target must be positive")
    m = max(1, math.ceil(target / step))
    if not m * step >= target:
        raise RuntimeError("least-m certificate failed high side")
    if m > 1 and (m - 1) * step >= target:
        raise RuntimeError("least-m certificate failed low side")
    return m


# ----------------------------------------------------------------------
# the sequences themselves
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class PrimarySequences:
    """d(n), l(n) and their cumulative products, indices 0..depth.

    Index 0 rows are the empty-product conventions l(0) = r(0) = s(0) = 1;
    d_seq[0] is a placeholder and must not be read.
    """

    d_seq: tuple[int, ...]
    l_seq: tuple[int, ...]
    r_prod: tuple[int, ...]
    s_prod: tuple[int, ...]
    ratio: tuple[Fraction, ...]   # ratio[n] = s(n)/r(n), decreases to kappa


def slot_padding(d: int, n: int) -> int:
    """Number of non-projection slots at level n: 1 + 2^(d*n-d) for n >= 1."""
    return 1 + 2 ** (d * n - d)


def generate_d(kappa: Fraction, d: int, depth: int) -> PrimarySequences:
    """Generate d(n), l(n), r(n), s(n) and the running ratio to ``depth``."""
    if not (0 < kappa < 1):
        raise ValueError("kappa must lie strictly between 0 and 1")
    if d < 1:
        raise ValueError("torus rank d must be a positive integer")
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    d_seq, l_seq = [0], [1]
    r_prod, s_prod, ratio = [1], [1], [Fraction(1)]
    for n in range(1, depth + 1):
        pad = slot_padding(d, n)
        dn = least_k_ratio_exceeds(pad, kappa / ratio[n - 1])
        ln = dn + pad
        d_seq.append(dn)
        l_seq.append(ln)
        r_prod.append(r_prod[n - 1] * ln)
        s_prod.append(s_prod[n - 1] * dn)
        ratio.append(ratio[n - 1] * Fraction(dn, ln))
        if not kappa < ratio[n] < ratio[n - 1]:
            raise RuntimeError(f"ratio left (kappa, 1) at level {n}")
    return PrimarySequences(tuple(d_seq), tuple(l_seq), tuple(r_prod),
                            tuple(s_prod), tuple(ratio))


@dataclass(frozen=True)
class SecondarySequences:
    """d'(n) against the smaller target, with gamma_n = prod d'(k)/l(k)."""

    d_prime_seq: tuple[int, ...]
    s_prime_prod: tuple[int, ...]
    gamma: tuple[Fraction, ...]


def generate_d_prime(kappa: Fraction, kappa_prime: Fraction,
                     primary: PrimarySequences, depth: int) -> SecondarySequences:
    """Generate d'(n) so that gamma_n * rho_n lands in [kappa', kappa' + 1/l(n)).

    When kappa' = kappa the construction collapses to d' = d exactly.
    """
    if not (0 < kappa_prime <= kappa):
        raise ValueError("kappa' must lie in (0, kappa]")
    if kappa_prime == kappa:
        gamma = primary.ratio
        return SecondarySequences(primary.d_seq, primary.s_prod, gamma)
    d_prime, s_prime, gamma = [0], [1], [Fraction(1)]
    for n in range(1, depth + 1):
        rho_n = kappa / primary.ratio[n]
        ln = primary.l_seq[n]
        step = gamma[n - 1] * rho_n / ln
        m = least_m_product_reaches(step, kappa_prime)
        if not 1 <= m <= primary.d_seq[n]:
            raise RuntimeError(f"d'({n}) = {m} escapes [1, d({n})]")
        d_prime.append(m)
        s_prime.append(s_prime[n - 1] * m)
        gamma.append(gamma[n - 1] * Fraction(m, ln))
        gap = gamma[n] * rho_n - kappa_prime
        if not (0 <= gap < Fraction(1, ln)):
            raise RuntimeError(f"gamma*rho window missed at level {n}")
    return SecondarySequences(tuple(d_prime), tuple(s_prime), tuple(gamma))


def choose_h(params: TargetParams, depth: int,
             h_override: tuple[int, ...] | None = None
             ) -> tuple[tuple[int, ...], tuple[int, ...], str]:
    """Pick the multiplicity sequences h(n), h'(n) for n = 0..depth.

    Returns (h, h_prime, rule).  Overrides are only meaningful when the
    h-sequence grows; they must start at 1, be nondecreasing, and keep
    h(n)/2^(nd) nonincreasing so the downstream smallness arguments hold.
    """
    rate = derive_kappa(params)
    if not rate.h_grows:
        if h_override is not None:
            raise ValueError("h-sequence override only applies when h grows")
        const = (rate.h_base,) * (depth + 1)
        return const, const, H_RULE_CONSTANT
    if h_override is None:
        h = tuple(range(1, depth + 2))
        rule = H_RULE_LINEAR
    else:
        h = tuple(int(x) for x in h_override)
        if len(h) < depth + 1:
            raise ValueError(f"h-sequence override needs {depth + 1} entries")
        h = h[:depth + 1]
        if h[0] != 1:
            raise ValueError("h(0) must equal 1")
        if any(b < a for a, b in zip(h, h[1:])):
            raise ValueError("h-sequence must be nondecreasing")
        for n in range(depth):
            if Fraction(h[n + 1], 2 ** (params.d * (n + 1))) > \
                    Fraction(h[n], 2 ** (params.d * n)):
                raise ValueError("h(n)/2^(nd) must be nonincreasing")
        rule = H_RULE_EXPLICIT
    if rate.h_prime_grows:
        return h, h, rule
    return h, (rate.h_prime_base,) * (depth + 1), rule


# ----------------------------------------------------------------------
# the assembled table
# ----------------------------------------------------------------------

FORMAT_VERSION = "1"


@dataclass(frozen=True)
class GrowthTables:
    """Every governing sequence of one construction, to a finite depth.

    Accessors take the level n directly; sequences that start at n = 1
    reject index 0.  All members are exact.
    """

    params: TargetParams
    depth: int
    regime: str
    kappa: Fraction
    kappa_prime: Fraction
    h_rule: str
    h_seq: tuple[int, ...]
    h_prime_seq: tuple[int, ...]
    primary: PrimarySequences
    secondary: SecondarySequences

    # -- accessors ------------------------------------------------------

    def _level(self, n: int, lo: int = 0) -> int:
        if not lo <= n <= self.depth:
            raise ValueError(f"level {n} outside [{lo}, {self.depth}]")
        return n

    def d(self, n: int) -> int:
        return self.primary.d_seq[self._level(n, 1)]

    def d_prime(self, n: int) -> int:
        return self.secondary.d_prime_seq[self._level(n, 1)]

    def l(self, n: int) -> int:
        return self.primary.l_seq[self._level(n)]

    def r(self, n: int) -> int:
        return self.primary.r_prod[self._level(n)]

    def s(self, n: int) -> int:
        return self.primary.s_prod[self._level(n)]

    def s_prime(self, n: int) -> int:
        return self.secondary.s_prime_prod[self._level(n)]

    def ratio(self, n: int) -> Fraction:
        """s(n)/r(n), the running product of d(k)/l(k)."""
        return self.primary.ratio[self._level(n)]

    def rho(self, n: int) -> Fraction:
        """kappa divided by the running ratio, computed exactly."""
        return self.kappa / self.ratio(self._level(n))

    def gamma(self, n: int) -> Fraction:
        """s'(n)/r(n), the running product of d'(k)/l(k)."""
        return self.secondary.gamma[self._level(n)]

    def h(self, n: int) -> int:
        return self.h_seq[self._level(n)]

    def h_prime(self, n: int) -> int:
        return self.h_prime_seq[self._level(n)]

    def torus_points(self, n: int) -> int:
        """2^(nd), the number of order-2^n lattice points indexing one row."""
        return 2 ** (self.params.d * self._level(n))

    def bit_lengths(self) -> dict[str, list[int]]:
        return {
            "d": [x.bit_length() for x in self.primary.d_seq[1:]],
            "r": [x.bit_length() for x in self.primary.r_prod],
            "s": [x.bit_length() for x in self.primary.s_prod],
        }

    # -- serialization --------------------------------------------------

    def to_json_obj(self) -> dict[str, Any]:
        obj: dict[str, Any] = {
            "formatVersion": FORMAT_VERSION,
            "kind": "tables",
            "params": self.params.to_json_obj(),
            "depth": str(self.depth),
            "regime": self.regime,
            "kappa": fraction_to_json(self.kappa),
            "kappaPrime": fraction_to_json(self.kappa_prime),
            "hRule": self.h_rule,
            "h": ints_to_json(self.h_seq),
            "hPrime": ints_to_json(self.h_prime_seq),
            "d": ints_to_json(self.primary.d_seq[1:]),
            "dPrime": ints_to_json(self.secondary.d_prime_seq[1:]),
            "l": ints_to_json(self.primary.l_seq[1:]),
            "r": ints_to_json(self.primary.r_prod),
            "s": ints_to_json(self.primary.s_prod),
            "sPrime": ints_to_json(self.secondary.s_prime_prod),
            "ratio": [fraction_to_json(x) for x in self.primary.ratio],
            "gamma": [fraction_to_json(x) for x in self.secondary.gamma],
            "bitLengths": self.bit_lengths(),
        }
        if self.h_rule == H_RULE_EXPLICIT:
            obj["hSeqOverride"] = ints_to_json(self.h_seq)
        return obj

    @classmethod
    def from_json_obj(cls, obj: Any) -> "GrowthTables":
        if not isinstance(obj, dict) or obj.get("kind") != "tables":
            raise ValueError("not a tables document")
        if obj.get("formatVersion") != FORMAT_VERSION:
            raise ValueError(f"unknown formatVersion {obj.get('formatVersion')!r}")
        depth = int(obj["depth"])
        d_seq = (0,) + ints_from_json(obj["d"])
        l_seq = (1,) + ints_from_json(obj["l"])
        primary = PrimarySequences(
            d_seq, l_seq,
            ints_from_json(obj["r"]), ints_from_json(obj["s"]),
            tuple(fraction_from_json(x) for x in obj["ratio"]))
        secondary = SecondarySequences(
            (0,) + ints_from_json(obj["dPrime"]),
            ints_from_json(obj["sPrime"]),
            tuple(fraction_from_json(x) for x in obj["gamma"]))
        tables = cls(
            params=TargetParams.from_json_obj(obj["params"]),
            depth=depth,
            regime=str(obj["regime"]),
            kappa=fraction_from_json(obj["kappa"]),
            kappa_prime=fraction_from_json(obj["kappaPrime"]),
            h_rule=str(obj["hRule"]),
            h_seq=ints_from_json(obj["h"]),
            h_prime_seq=ints_from_json(obj["hPrime"]),
            primary=primary,
            secondary=secondary)
        lengths = {len(primary.d_seq), len(primary.l_seq), len(primary.r_prod),
                   len(primary.s_prod), len(primary.ratio),
                   len(secondary.d_prime_seq), len(secondary.s_prime_prod),
                   len(secondary.gamma), len(tables.h_seq),
                   len(tables.h_prime_seq)}
        if lengths != {depth + 1}:
            raise ValueError("tables document has inconsistent sequence lengths")
        return tables


def build_tables(params: TargetParams, depth: int,
                 h_override: tuple[int, ...] | None = None) -> GrowthTables:
    """Generate the complete table for ``params`` down to ``depth``."""
    rate = derive_kappa(params)
    primary = generate_d(rate.kappa, params.d, depth)
    secondary = generate_d_prime(rate.kappa, rate.kappa_prime, primary, depth)
    h_seq, h_prime_seq, rule = choose_h(params, depth, h_override)
    return GrowthTables(params=params, depth=depth, regime=rate.regime,
                        kappa=rate.kappa, kappa_prime=rate.kappa_prime,
                        h_rule=rule, h_seq=h_seq, h_prime_seq=h_prime_seq,
                        primary=primary, secondary=secondary)


def tables_from_cli(r: str, r_prime: str, d: int, depth: int,
                    c: str | None = None,
                    h_seq: str | None = None) -> GrowthTables:
    """Build tables from the textual forms the CLI accepts."""
    kwargs: dict[str, Any] = {}
    if c is not None:
        kwargs["c_infinite"] = parse_fraction(c)
    params = TargetParams(ExtendedRational.parse(r),
                          ExtendedRational.parse(r_prime), d, **kwargs)
    override = None
    if h_seq is not None:
        override = tuple(int(part) for part in h_seq.split(","))
    return build_tables(params, depth, override)


# ----------------------------------------------------------------------
# invariant suite
# ----------------------------------------------------------------------

def verify_tables(tables: GrowthTables) -> CheckReport:
    """Replay every defining identity and window of the table, exactly."""
    c = Checker()
    t = tables
    rate = derive_kappa(t.params)
    c.check("regime matches params", t.regime == rate.regime)
    c.check("kappa matches params", t.kappa == rate.kappa, f"kappa={t.kappa}")
    c.check("kappa' matches params", t.kappa_prime == rate.kappa_prime)
    c.check("kappa in (0,1)", 0 < t.kappa < 1)
    c.check("kappa' in (0, kappa]", 0 < t.kappa_prime <= t.kappa)

    # h-sequences
    if rate.h_grows:
        c.check("h(0) = 1", t.h(0) == 1)
    else:
        c.check("h constant", set(t.h_seq) == {rate.h_base})
    c.check("h nondecreasing",
            all(t.h(n) <= t.h(n + 1) for n in range(t.depth)))
    if rate.h_prime_grows:
        c.check("h' = h", t.h_prime_seq == t.h_seq)
    else:
        c.check("h' constant", set(t.h_prime_seq) == {rate.h_prime_base})
    c.check("h(n)/2^(nd) nonincreasing",
            all(Fraction(t.h(n + 1), t.torus_points(n + 1))
                <= Fraction(t.h(n), t.torus_points(n))
                for n in range(t.depth)))

    c.check("empty products", t.l(0) == t.r(0) == t.s(0) == t.s_prime(0) == 1
            and t.ratio(0) == t.gamma(0) == 1)

    prime_collapses = t.kappa_prime == t.kappa
    for n in range(1, t.depth + 1):
        pad = slot_padding(t.params.d, n)
        target = t.kappa / t.ratio(n - 1)
        c.check(f"d({n}) minimal",
                Fraction(t.d(n), t.d(n) + pad) > target
                and (t.d(n) == 1
                     or not Fraction(t.d(n) - 1, t.d(n) - 1 + pad) > target),
                f"d({n}) has {t.d(n).bit_length()} bits")
        c.check(f"l({n}) = d({n}) + 1 + 2^(dn-d)", t.l(n) == t.d(n) + pad)
        c.check(f"r({n}) multiplicative", t.r(n) == t.r(n - 1) * t.l(n))
        c.check(f"s({n}) multiplicative", t.s(n) == t.s(n - 1) * t.d(n))
        c.check(f"ratio({n}) = s/r",
                t.ratio(n) == Fraction(t.s(n), t.r(n))
                and t.ratio(n) == t.ratio(n - 1) * Fraction(t.d(n), t.l(n)))
        c.check(f"kappa < ratio({n}) < ratio({n - 1})",
                t.kappa < t.ratio(n) < t.ratio(n - 1))
        if t.d(n) >= 2:
            c.check(f"ratio({n}) - kappa <= kappa/(d({n})-1)",
                    t.ratio(n) - t.kappa <= t.kappa / (t.d(n) - 1))
        c.check(f"rho({n}) in (kappa, 1)", t.kappa < t.rho(n) < 1)

        if prime_collapses:
            c.check(f"d'({n}) = d({n})", t.d_prime(n) == t.d(n))
        else:
            step = t.gamma(n - 1) * t.rho(n) / t.l(n)
            c.check(f"d'({n}) minimal",
                    t.d_prime(n) * step >= t.kappa_prime
                    and (t.d_prime(n) == 1
                         or not (t.d_prime(n) - 1) * step >= t.kappa_prime))
        c.check(f"1 <= d'({n}) <= d({n})", 1 <= t.d_prime(n) <= t.d(n))
        c.check(f"s'({n}) multiplicative",
                t.s_prime(n) == t.s_prime(n - 1) * t.d_prime(n))
        c.check(f"gamma({n}) = s'/r",
                t.gamma(n) == Fraction(t.s_prime(n), t.r(n)))
        gap = t.gamma(n) * t.rho(n) - t.kappa_prime
        c.check(f"gamma*rho window at {n}",
                0 <= gap < Fraction(1, t.l(n)), f"gap={gap}")

    c.check("d nondecreasing",
            all(t.d(n) <= t.d(n + 1) for n in range(1, t.depth)))
    return c.report()
