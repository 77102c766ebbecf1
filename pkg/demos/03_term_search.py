"""Searching clones for Mal'tsev, Day and Jonsson terms."""

# %%
from uacomm import (bare_set, chain_lattice, cyclic_group, day_from_maltsev, find_day, find_jonsson,
                    find_maltsev)
from uacomm.terms import clone_generate

z2 = cyclic_group(2)
print("binary term operations of Z2:", [str(t) for t in clone_generate(z2, 2)])

# %%
# Z2 has a Mal'tsev term at depth two; a Day chain is built from it and checked on every 4-tuple.
p = find_maltsev(z2)
print("p =", p.chain[0], p.verified)
day = day_from_maltsev(z2, p.chain[0])
print(day.terms(), day.verified)

# %%
# Lattices have no Mal'tsev term, but a majority term gives a Jonsson chain of length two.
c2 = chain_lattice(2)
print("Mal'tsev on C2:", find_maltsev(c2))
j = find_jonsson(c2)
print(j.terms())

# The shortest Day chain for the lattice needs four terms.
print(find_day(c2).terms())

# %%
# Without operations the clone is just the projections, so no chain exists at any length.
print("Day chain on a bare 2-set:", find_day(bare_set(2), max_len=50))
