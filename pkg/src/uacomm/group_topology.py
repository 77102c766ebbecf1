"""Neighbourhood bases of the identity in finite groups and the left/right uniformities."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Optional

import numpy as np

from .algebra import AlgebraError, FiniteAlgebra, filter_is_compatible, subalgebra_generate
from .relations import BitRelation, RelationFilter, check_axioms


class GroupError(ValueError):
    pass


class FiniteGroup:
    """A FiniteAlgebra with one binary, one unary and one nullary operation obeying the group laws."""

    def __init__(self, algebra: FiniteAlgebra):
        by_arity = {}
        for op, arity in algebra.signature:
            if arity in by_arity or arity not in (0, 1, 2):
                raise GroupError("a group signature has exactly one binary, one unary and one constant")
            by_arity[arity] = op
        if set(by_arity) != {0, 1, 2}:
            raise GroupError("a group signature has exactly one binary, one unary and one constant")
        self.algebra = algebra
        self.n = algebra.size
        self.mul = algebra.tables[by_arity[2]]
        self.inv = algebra.tables[by_arity[1]]
        self.e = int(algebra.tables[by_arity[0]][()])
        x = np.arange(self.n)
        m = self.mul
        if not np.array_equal(m[m[:, :, None], x[None, None, :]], m[x[:, None, None], m[None, :, :]]):
            raise GroupError("multiplication is not associative")
        if not (np.array_equal(m[self.e], x) and np.array_equal(m[:, self.e], x)):
            raise GroupError("e is not an identity")
        if not (np.all(m[x, self.inv] == self.e) and np.all(m[self.inv, x] == self.e)):
            raise GroupError("inv is not an inverse")

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    def product(self, s: frozenset, t: frozenset) -> frozenset:
        return frozenset(int(self.mul[x, y]) for x in s for y in t)

    def inverse_set(self, s: frozenset) -> frozenset:
        return frozenset(int(self.inv[x]) for x in s)

    def conjugate(self, s: frozenset, a: int) -> frozenset:
        """a^-1 s a."""
        ai = self.inv[a]
        return frozenset(int(self.mul[self.mul[ai, x], a]) for x in s)

    def subgroups(self) -> list[frozenset]:
        """All subgroups generated by at most two elements, sorted by size then elements."""
        found = set()
        for x, y in itertools.combinations_with_replacement(range(self.n), 2):
            found.add(subalgebra_generate(self.algebra, [x, y]))
        found.add(frozenset([self.e]))
        return sorted(found, key=lambda s: (len(s), sorted(s)))

    def is_normal(self, s: frozenset) -> bool:
        return all(self.conjugate(s, a) == s for a in range(self.n))

    def commutator_subgroup(self, m: frozenset, k: frozenset) -> frozenset:
        """Subgroup generated by the commutators x y x^-1 y^-1 with x in m, y in k."""
        mul, inv = self.mul, self.inv
        gens = {int(mul[mul[mul[x, y], inv[x]], inv[y]]) for x in m for y in k}
        return subalgebra_generate(self.algebra, gens or [self.e])


class NeighborhoodBase:
    def __init__(self, group: FiniteGroup, sets: Iterable[Iterable[int]]):
        sets = tuple(dict.fromkeys(frozenset(int(x) for x in s) for s in sets))
        if not sets:
            raise GroupError("a neighbourhood base must be nonempty")
        for s in sets:
            if group.e not in s:
                raise GroupError(f"neighbourhood {sorted(s)} misses the identity")
            if any(not 0 <= x < group.n for x in s):
                raise GroupError(f"neighbourhood {sorted(s)} leaves the carrier")
        self.group = group
        self.sets = sets
        self.core = reduce(lambda s, t: s & t, sets)

    def members(self) -> list[frozenset]:
        """The base sets plus their intersection, the least member."""
        return list(self.sets) + ([self.core] if self.core not in self.sets else [])

    def __repr__(self) -> str:
        return "NeighborhoodBase(" + "|".join(format_subset(s) for s in self.sets) + ")"


@dataclass(frozen=True)
class GroupAxiomReport:
    G3: bool
    G4: bool
    G5: bool
    G5prime: bool

    @property
    def topological(self) -> bool:
        return self.G3 and self.G4 and self.G5


def check_group_axioms(nb: NeighborhoodBase) -> GroupAxiomReport:
    """Each axiom over every member of the filter; the core is the best witness."""
    g, core = nb.group, nb.core
    members = nb.members()
    cc = g.product(core, core)
    g3 = all(cc <= s for s in members)
    g4 = all(core <= g.inverse_set(s) for s in members)
    g5 = all(core <= g.conjugate(s, a) for s in members for a in range(g.n))
    g5p = all(core <= reduce(lambda x, y: x & y, (g.conjugate(s, a) for a in range(g.n)))
              for s in members)
    return GroupAxiomReport(g3, g4, g5, g5p)


def _coset_relation(g: FiniteGroup, s: frozenset, side: str) -> BitRelation:
    x = np.arange(g.n)
    mask = np.zeros(g.n, dtype=bool)
    mask[list(s)] = True
    if side == "left":
        # y in xN  iff  x^-1 y in N
        return BitRelation(mask[g.mul[g.inv[x][:, None], x[None, :]]])
    # y in Nx  iff  y x^-1 in N
    return BitRelation(mask[g.mul[x[None, :], g.inv[x][:, None]]])


def left_relations(nb: NeighborhoodBase) -> RelationFilter:
    return RelationFilter([_coset_relation(nb.group, s, "left") for s in nb.sets])


def right_relations(nb: NeighborhoodBase) -> RelationFilter:
    return RelationFilter([_coset_relation(nb.group, s, "right") for s in nb.sets])


@dataclass(frozen=True)
class EquivalenceTheoremReport:
    items: dict
    axioms: GroupAxiomReport

    @property
    def precondition(self) -> bool:
        return self.axioms.topological

    @property
    def consistent(self) -> bool:
        return len(set(self.items.values())) == 1

    @property
    def value(self) -> Optional[bool]:
        vals = set(self.items.values())
        return vals.pop() if len(vals) == 1 else None


def equivalence_theorem_check(nb: NeighborhoodBase) -> EquivalenceTheoremReport:
    """Evaluate the six equivalent conditions on the left and right uniformities.

    The items are computed even when the base fails (G3)-(G5); the report
    carries the axiom flags so callers can tell the two situations apart.
    """
    a = nb.group.algebra
    ul, ur = left_relations(nb), right_relations(nb)
    axioms = check_group_axioms(nb)
    items = {
        "1:right<=left": ur <= ul,
        "2:left<=right": ul <= ur,
        "3:left==right": ul == ur,
        "4:left compatible": filter_is_compatible(a, ul),
        "5:right compatible": filter_is_compatible(a, ur),
        "6:G5'": axioms.G5prime,
    }
    return EquivalenceTheoremReport(items, axioms)


def delta_set(g: FiniteGroup, u: BitRelation, side: str = "left") -> frozenset:
    """{b^-1 c : b U c} (left) or {c b^-1 : b U c} (right)."""
    b, c = np.nonzero(u.bits)
    if side == "left":
        return frozenset(g.mul[g.inv[b], c].tolist())
    return frozenset(g.mul[c, g.inv[b]].tolist())


def is_translation_invariant(g: FiniteGroup, u: BitRelation, side: str = "left") -> bool:
    x = np.arange(g.n)
    b, c = np.nonzero(u.bits)
    if side == "left":
        return bool(u.bits[g.mul[x[:, None], b[None, :]], g.mul[x[:, None], c[None, :]]].all())
    return bool(u.bits[g.mul[b[None, :], x[:, None]], g.mul[c[None, :], x[:, None]]].all())


def invariant_base(g: FiniteGroup, u: RelationFilter, side: str = "left") -> RelationFilter:
    """A base of left (or right) translation invariant relations for a compatible uniformity.

    For each base U the core serves as U', since translating a core pair
    stays in the core; V then relates x, y when x^-1 y (or y x^-1) lies in
    delta(U').
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    if not (check_axioms(u).uniformity and filter_is_compatible(g.algebra, u)):
        raise AlgebraError("invariant_base needs a compatible uniformity")
    core = u.core
    if not is_translation_invariant(g, core, side):
        raise AlgebraError("core of a compatible uniformity should be translation invariant")
    out = []
    for base_u in u.base:
        if not core <= base_u:
            raise AlgebraError("core not contained in a base element")
        out.append(_coset_relation(g, delta_set(g, core, side), side))
    return RelationFilter(out)


# --- subset literals --------------------------------------------------------------------


class SubsetParseError(ValueError):
    pass


_SUBSET_RE = re.compile(r"^\{([\d\s]*)\}$")


def parse_subset(text: str) -> frozenset:
    m = _SUBSET_RE.match(text.strip())
    if not m:
        raise SubsetParseError(f"not a subset literal: {text!r}")
    return frozenset(int(t) for t in m.group(1).split())


def parse_base(text: str) -> list[frozenset]:
    """``{0}|{0 3}`` to a list of subsets."""
    return [parse_subset(chunk) for chunk in text.split("|") if chunk.strip()]


def format_subset(s: Iterable[int]) -> str:
    return "{" + " ".join(str(x) for x in sorted(s)) + "}"
