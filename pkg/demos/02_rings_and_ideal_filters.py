"""Ideal products in Z_n, and the same arithmetic one level up on filters of ideals of Z."""

# %%
from math import gcd

from uacomm import c_commutator, con_all, zn_ring
from uacomm.unif import ZIdealFilter, z_commutator, z_join, z_meet, z_parse


def ideal(n, p):
    """Generator d of the ideal (d) whose cosets are the blocks of p."""
    d = n
    for x in range(n):
        if p.related(0, x):
            d = gcd(d, x)
    return d


n = 12
r = zn_ring(n)
lat = con_all(r)
print(f"Z{n} has {len(lat)} ideals:", sorted(ideal(n, p) for p in lat))

# %%
# The commutator of two ideal congruences is the congruence of the product ideal.
rows = []
for p in lat:
    for q in lat:
        d1, d2 = ideal(n, p), ideal(n, q)
        got = ideal(n, c_commutator(r, p, q))
        rows.append((d1, d2, got, gcd(d1 * d2, n)))
bad = [row for row in rows if row[2] != row[3]]
print(len(rows), "pairs checked,", len(bad), "mismatches")
print("e.g. [(2),(2)] =", next(f"({row[2]})" for row in rows if row[:2] == (2, 2)))

# %%
# Filters of ideals of Z: caps per prime, meet = max, join = min, commutator = sum.
f = z_parse("(4) & 3^inf")
g = ZIdealFilter.power_filter(10)
for name, op in [("meet", z_meet), ("join", z_join), ("commutator", z_commutator)]:
    h = op(f, g)
    print(f"{name:>10}: {h.canonical():<24} {h.pretty()}")

# %%
two, three = ZIdealFilter.power_filter(2), ZIdealFilter.power_filter(3)
print(z_commutator(two, three).pretty())
