"""Left and right uniformities of a neighbourhood base on S3 and D4."""

# %%
from uacomm import dihedral_group, symmetric_group
from uacomm.group_topology import (FiniteGroup, NeighborhoodBase, check_group_axioms,
                                   equivalence_theorem_check, format_subset)

for g in (FiniteGroup(symmetric_group(3)), FiniteGroup(dihedral_group())):
    print(g.algebra.name)
    for h in g.subgroups():
        rep = equivalence_theorem_check(NeighborhoodBase(g, [h]))
        flag = "normal" if g.is_normal(h) else "      "
        print(f"  {format_subset(h):<20} {flag}  items -> {rep.value}")

# %%
# A non-normal subgroup still satisfies (G3) and (G4); only conjugation fails.
s3 = FiniteGroup(symmetric_group(3))
h = next(h for h in s3.subgroups() if len(h) == 2)
print(check_group_axioms(NeighborhoodBase(s3, [h])))
print(equivalence_theorem_check(NeighborhoodBase(s3, [h])).items)
