"""Walk through the commutator of S3 by hand, then check the four routes agree."""

# %%
import itertools

from uacomm import (acceptance_catalog, all_routes, auto_day_witness, centralizes, con_all, m_matrices)

s3 = acceptance_catalog()["S3"]
lat = con_all(s3)
for p in lat:
    print(p)

# Three congruences: the identity, the one with blocks the cosets of A3, and everything.

# %%
bottom, a3, top = lat.elements
m = m_matrices(s3, top, top)
print(len(m), "matrices in M(top, top) out of", s3.size ** 4)

# The term condition C(top, top; bottom) fails.  The report hands back the
# lexicographically least offending matrix, rows (u11 u12) and (u21 u22).
rep = centralizes(s3, top, top, bottom)
print(rep)

# %%
# Modulo the A3 congruence it holds, so [top, top] sits at A3.
print(centralizes(s3, top, top, a3))

# %%
w = auto_day_witness(s3)
for i, t in enumerate(w.terms()):
    print(f"m{i} = {t}")

for alpha, beta in itertools.product(lat, lat):
    routes = all_routes(s3, alpha, beta, w)
    values = set(routes.values())
    print(f"[{alpha}, {beta}] = {values.pop()}  ({len(routes)} routes)")
