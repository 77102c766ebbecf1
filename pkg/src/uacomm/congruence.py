"""Congruence generation, congruence lattices, quotients, kernels and pushforwards."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

import numpy as np

from .algebra import (AlgebraError, CapExceeded, FiniteAlgebra, Homomorphism, filter_is_compatible,
                      l_f_base, relation_image)
from .partition import Partition, UnionFind
from .relations import (MAX_CARRIER, BitRelation, CarrierMismatch, RelationFilter, check_axioms,
                        compose, equivalence_closure, inverse)

Pairs = Union[Iterable[tuple[int, int]], BitRelation, Partition]


def _pair_list(pairs: Pairs) -> list[tuple[int, int]]:
    if isinstance(pairs, (BitRelation, Partition)):
        return pairs.pairs()
    return [(int(x), int(y)) for x, y in pairs]


def cg(a: FiniteAlgebra, pairs: Pairs = (), start: Optional[Partition] = None) -> Partition:
    """Least congruence containing ``pairs`` (and ``start``, when given).

    Union-find seeded with the pairs, then closed under every unary
    translation obtained from a basic operation with the other arguments
    fixed, until a full pass adds nothing.
    """
    n = a.size
    uf = UnionFind(n)
    if start is not None:
        if start.carrier_size != n:
            raise CarrierMismatch("start partition and algebra carriers differ")
        for i, lab in enumerate(start.labels):
            uf.union(i, lab)
    for x, y in _pair_list(pairs):
        if not (0 <= x < n and 0 <= y < n):
            raise ValueError(f"pair ({x},{y}) outside carrier of size {n}")
        uf.union(x, y)
    trans = a.translations
    ident = np.arange(n)
    while True:
        labels = np.array(uf.labels(), dtype=np.int64)
        moved = np.flatnonzero(labels != ident)
        if not moved.size:
            break
        changed = False
        for t in trans:
            xs = t[moved]
            rs = t[labels[moved]]
            mask = labels[xs] != labels[rs]
            if mask.any():
                for x, y in zip(xs[mask].tolist(), rs[mask].tolist()):
                    changed |= uf.union(x, y)
        if not changed:
            break
    return Partition(uf.labels())


def is_congruence(a: FiniteAlgebra, p: Partition) -> bool:
    return p.carrier_size == a.size and a.is_compatible(p)


def meet(p: Partition, q: Partition) -> Partition:
    return p & q


def join(a: FiniteAlgebra, p: Partition, q: Partition) -> Partition:
    """Join in Con A; the equivalence join of two congruences is already compatible."""
    if p.carrier_size != a.size or q.carrier_size != a.size:
        raise CarrierMismatch("partitions and algebra carriers differ")
    return p | q


def _lattice_key(p: Partition):
    return (-p.num_blocks(), p.labels)


@dataclass
class CongruenceLattice:
    algebra: FiniteAlgebra
    elements: list[Partition]
    leq: np.ndarray = field(repr=False)

    def __post_init__(self):
        self._index = {p: i for i, p in enumerate(self.elements)}

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, p: Partition) -> bool:
        return p in self._index

    def index(self, p: Partition) -> int:
        return self._index[p]

    @property
    def bottom(self) -> Partition:
        return Partition.bottom(self.algebra.size)

    @property
    def top(self) -> Partition:
        return Partition.top(self.algebra.size)

    def pairs(self):
        for p in self.elements:
            for q in self.elements:
                yield p, q


def con_all(a: FiniteAlgebra, cap: int = MAX_CARRIER) -> CongruenceLattice:
    """All congruences: principal ones, then closed under joins."""
    n = a.size
    if n > cap:
        raise CapExceeded(f"carrier size {n} exceeds cap {cap} for Con A")
    found = {Partition.bottom(n)}
    for x in range(n):
        for y in range(x + 1, n):
            found.add(cg(a, [(x, y)]))
    items = list(found)
    work = list(items)
    while work:
        p = work.pop()
        for q in list(items):
            r = p | q
            if r not in found:
                found.add(r)
                items.append(r)
                work.append(r)
    elements = sorted(found, key=_lattice_key)
    for p in elements:
        for q in elements:
            if (p & q) not in found:
                raise AlgebraError("congruence set not closed under meet")
    leq = np.array([[p <= q for q in elements] for p in elements], dtype=bool)
    return CongruenceLattice(a, elements, leq)


def quotient(a: FiniteAlgebra, alpha: Partition) -> tuple[FiniteAlgebra, Homomorphism]:
    if not is_congruence(a, alpha):
        raise AlgebraError("alpha is not a congruence of the algebra")
    reps = sorted(set(alpha.labels))
    index = np.zeros(a.size, dtype=np.int64)
    pos = {r: i for i, r in enumerate(reps)}
    for x in range(a.size):
        index[x] = pos[alpha.labels[x]]
    reps_arr = np.array(reps, dtype=np.int64)
    tables = {}
    for op, arity in a.signature:
        t = a.tables[op]
        tables[op] = index[t[np.ix_(*([reps_arr] * arity))]] if arity else index[t[()]]
    q = FiniteAlgebra(a.signature, len(reps), tables, name=f"{a.name}/{alpha}")
    return q, Homomorphism(a, q, index)


def kernel(f: Homomorphism) -> Partition:
    return Partition(f.map.tolist())


@dataclass(frozen=True)
class LatticeLaws:
    modular: bool
    distributive: bool


def lattice_law_check(lat: CongruenceLattice) -> LatticeLaws:
    els = lat.elements
    m = len(els)
    idx = lat._index
    mt = np.array([[idx[p & q] for q in els] for p in els], dtype=np.int64)
    jn = np.array([[idx[p | q] for q in els] for p in els], dtype=np.int64)
    x, y, z = np.meshgrid(np.arange(m), np.arange(m), np.arange(m), indexing="ij")
    distributive = bool(np.all(mt[x, jn[y, z]] == jn[mt[x, y], mt[x, z]]))
    below = lat.leq[x, z]
    modular = bool(np.all(~below | (jn[x, mt[y, z]] == mt[jn[x, y], z])))
    return LatticeLaws(modular, distributive)


def permute(p: Partition, q: Partition) -> bool:
    """Whether p o q = q o p as relations."""
    pr, qr = p.relation(), q.relation()
    return compose(pr, qr) == compose(qr, pr)


# --- uniformities generated on an algebra ----------------------------------


def ug(a: FiniteAlgebra, f: Union[RelationFilter, BitRelation]) -> RelationFilter:
    """Least compatible uniformity above a filter: principal over Cg of its core."""
    if isinstance(f, BitRelation):
        f = RelationFilter.principal(f)
    if f.carrier_size != a.size:
        raise CarrierMismatch("filter and algebra carriers differ")
    return RelationFilter.principal(cg(a, f.core).relation())


def ug_saturate(a: FiniteAlgebra, f: Union[RelationFilter, BitRelation]) -> RelationFilter:
    """Least compatible uniformity above a filter, by saturating the core under the axioms.

    Repeatedly adds the diagonal, inverses, composites and operation images to
    the core until nothing changes. Independent of :func:`cg`.
    """
    if isinstance(f, BitRelation):
        f = RelationFilter.principal(f)
    if f.carrier_size != a.size:
        raise CarrierMismatch("filter and algebra carriers differ")
    r = f.core | BitRelation.diagonal(a.size)
    while True:
        nxt = r | inverse(r) | compose(r, r)
        for op in a.signature.names:
            nxt = nxt | relation_image(a, op, r)
        if nxt == r:
            return RelationFilter.principal(r)
        r = nxt


def is_compatible_uniformity(a: FiniteAlgebra, f: RelationFilter) -> bool:
    return check_axioms(f).uniformity and filter_is_compatible(a, f)


def pushforward(f: Homomorphism, u: RelationFilter, compatible: bool = True) -> RelationFilter:
    """Least (compatible) uniformity v on the target with u <= f^-1(v).

    The compatible case takes Ug of the filter based on the l_f closures of
    the members of u; the core of u is included among the members so the
    result is exact rather than merely cofinal with the base given.
    """
    if u.carrier_size != f.source.size:
        raise CarrierMismatch("filter does not live on the source")
    members = list(u.base)
    if u.core not in members:
        members.append(u.core)
    if compatible:
        if not is_compatible_uniformity(f.source, u):
            raise ValueError("pushforward needs a compatible uniformity")
        base = [cg(f.target, l_f_base(f, m)).relation() for m in members]
    else:
        if not check_axioms(u).uniformity:
            raise ValueError("pushforward needs a uniformity")
        base = [equivalence_closure(f.image_relation(m)) for m in members]
    out, seen = [], set()
    for b in base:
        if b not in seen:
            seen.add(b)
            out.append(b)
    return RelationFilter(out)
