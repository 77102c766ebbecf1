"""Pushing a compatible uniformity along a quotient map."""

# %%
from uacomm import Homomorphism, Partition, RelationFilter, cyclic_group, parse_partition, pushforward
from uacomm.algebra import l_f_base

z8, z4 = cyclic_group(8), cyclic_group(4)
f = Homomorphism(z8, z4, [x % 4 for x in range(8)])

# Each principal filter on Z8 lands on the principal filter of the least
# congruence of Z4 containing the image of its generator.
for text in ["0|1|2|3|4|5|6|7", "0 4|1 5|2 6|3 7", "0 2 4 6|1 3 5 7"]:
    alpha = parse_partition(text, 8)
    image = l_f_base(f, alpha.relation())
    v = pushforward(f, RelationFilter.principal(alpha.relation()))
    print(f"{text:<18} |L_f| = {len(image.pairs()):2d}   pushed: {Partition.from_relation(v.core)}")

# %%
# With a two-element base the core decides: the finer member maps onto the diagonal.
base = [parse_partition(t, 8).relation() for t in ("0 2 4 6|1 3 5 7", "0 4|1 5|2 6|3 7")]
v = pushforward(f, RelationFilter(base))
print([str(Partition.from_relation(r)) for r in v.base])
