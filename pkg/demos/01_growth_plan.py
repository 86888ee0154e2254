"""
Planning the growth sequences for a pair of comparison targets
==============================================================

A run of the planner for the standard worked example: radius 1/2 for the
plain tower and 1/3 for its transform.  Everything printed below is an
exact rational; no float appears anywhere in the pipeline.
"""

from fractions import Fraction

from ahtower import build_tables, tables_from_cli

# the CLI front door accepts the targets as strings, which keeps this
# file copy-pasteable into a shell session with `ahtower plan`
t = tables_from_cli("1/2", "1/3", d=1, depth=6)

print(f"targets: r = {t.params.r}, r' = {t.params.r_prime}, "
      f"lattice rank d = {t.params.d}")
print(f"derived rates: kappa = {t.kappa}, kappa' = {t.kappa_prime}")
print()

# d(n) is the least count of full-information arrows whose share of the
# l(n) slots pushes the running ratio s(n)/r(n) back above kappa; the
# other 1 + 2^(d*n-d) slots are the forced evaluation arrows
print(f"{'n':>2} {'d(n)':>12} {'l(n)':>12} {'r(n) digits':>12} "
      f"{'s(n)/r(n)':>24}")
for n in range(1, t.depth + 1):
    print(f"{n:>2} {t.d(n):>12} {t.l(n):>12} "
          f"{len(str(t.r(n))):>12} {str(t.ratio(n)):>24}")
print()

# the ratio column brackets kappa from above, and the distance is
# controlled by the latest denominator alone
for n in range(1, t.depth + 1):
    slack = t.ratio(n) - t.kappa
    cap = t.kappa / (t.d(n) - 1)
    assert Fraction(0) < slack <= cap
print("ratio slack vs its cap at the last level:",
      t.ratio(t.depth) - t.kappa, "<=", t.kappa / (t.d(t.depth) - 1))
print()

# the secondary row d'(n) plays the same game against kappa', inside the
# slots the primary row already fixed
print(f"{'n':>2} {'d_prime(n)':>12} {'gamma(n)':>26}")
for n in range(1, t.depth + 1):
    print(f"{n:>2} {t.d_prime(n):>12} {str(t.gamma(n)):>26}")
print()

# integer growth is doubly exponential; the bit census is how one decides
# what depth is affordable before asking for it
bits = t.bit_lengths()
print("bit lengths by level:")
for name in ("d", "r", "s"):
    print(f"  {name}: {bits[name]}")
print()

# with an infinite primary target there is no finite kappa to chase, so a
# growing h(n) takes over and the lattice outruns it
inf = tables_from_cli("inf", "5/2", d=1, depth=6)
print(f"infinite primary target: h' = {inf.h_prime(0)}, "
      f"kappa = kappa' = {inf.kappa}")
print("h(n) against lattice size:",
      [str(Fraction(inf.h(n), inf.torus_points(n))) for n in range(7)])

# the same tables can be built without the string front door
direct = build_tables(t.params, 6)
assert direct == t
