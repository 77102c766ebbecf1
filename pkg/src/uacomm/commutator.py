"""Term-condition commutators on finite algebras.

Matrices (u11, u12, u21, u22) are stored as 4-tuples in lexicographic order;
rows are (u11, u12) and (u21, u22), so alpha relates the columns and beta
relates the rows.
"""

from __future__ import annotations

import itertools
import weakref
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .algebra import POWER_CAP, AAlpha, AlgebraError, FiniteAlgebra, Homomorphism, a_alpha, close_tuples, decode
from .congruence import cg, con_all, kernel, permute
from .partition import Partition, UnionFind
from .relations import BitRelation, CarrierMismatch, RelationFilter
from .terms import TermWitness, WitnessError

RelLike = Union[Partition, BitRelation]


class CommutatorError(AlgebraError):
    pass


def _as_relation(r: RelLike) -> BitRelation:
    return r.relation() if isinstance(r, Partition) else r


@dataclass(frozen=True, eq=False)
class MatrixSubalgebra:
    base_algebra: FiniteAlgebra
    alpha: RelLike
    beta: RelLike
    elements: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.elements)

    def columns(self):
        """The four entry arrays u11, u12, u21, u22."""
        e = self.elements
        return e[:, 0], e[:, 1], e[:, 2], e[:, 3]


_MATRIX_CACHE: "weakref.WeakKeyDictionary[FiniteAlgebra, dict]" = weakref.WeakKeyDictionary()


def m_matrices(a: FiniteAlgebra, alpha: RelLike, beta: RelLike, cap: int = POWER_CAP) -> MatrixSubalgebra:
    """Subalgebra of A^4 generated by alpha-rows (a,a,a',a') and beta-columns (b,b',b,b').

    alpha and beta may be congruences or arbitrary reflexive relations.
    """
    for r in (alpha, beta):
        if r.carrier_size != a.size:
            raise CarrierMismatch("relation and algebra carriers differ")
        if isinstance(r, BitRelation) and not r.is_reflexive():
            raise ValueError("matrix generators need reflexive relations")
    cache = _MATRIX_CACHE.setdefault(a, {})
    key = (alpha, beta)
    if key in cache:
        return cache[key]
    ap = np.array(_as_relation(alpha).pairs(), dtype=np.int64).reshape(-1, 2)
    bp = np.array(_as_relation(beta).pairs(), dtype=np.int64).reshape(-1, 2)
    gens = np.concatenate([ap[:, [0, 0, 1, 1]], bp[:, [0, 1, 0, 1]]])
    codes = close_tuples(a, gens, k=4, cap=cap)
    m = MatrixSubalgebra(a, alpha, beta, decode(codes, a.size, 4))
    cache[key] = m
    return m


# --- centralization ---------------------------------------------------------------


@dataclass(frozen=True)
class CentralizationReport:
    holds: bool
    witness: Optional[tuple[int, int, int, int]] = None

    def __bool__(self) -> bool:
        return self.holds


def _report(m: MatrixSubalgebra, hyp: np.ndarray, concl: np.ndarray) -> CentralizationReport:
    bad = np.flatnonzero(hyp & ~concl)
    if not bad.size:
        return CentralizationReport(True)
    # elements are in lexicographic order, so the first violation is the least
    return CentralizationReport(False, tuple(int(v) for v in m.elements[bad[0]]))


def centralizes(a: FiniteAlgebra, alpha: Partition, beta: Partition, delta: Partition) -> CentralizationReport:
    """C(alpha, beta; delta): u11 delta u12 implies u21 delta u22 on every matrix."""
    m = m_matrices(a, alpha, beta)
    lab = delta.array
    u11, u12, u21, u22 = m.columns()
    return _report(m, lab[u11] == lab[u12], lab[u21] == lab[u22])


def weak_centralizes(a: FiniteAlgebra, alpha: Partition, beta: Partition, delta: Partition) -> CentralizationReport:
    """The weak condition: u11 = u12 implies u21 delta u22."""
    m = m_matrices(a, alpha, beta)
    lab = delta.array
    u11, u12, u21, u22 = m.columns()
    return _report(m, u11 == u12, lab[u21] == lab[u22])


def uniform_centralizes(a: FiniteAlgebra, u: RelationFilter, v: RelationFilter,
                        w: RelationFilter) -> bool:
    """First-form term condition for principal filters.

    For every member W of w, the approximants U = core u, V = core v and
    W' = core w must give: u11 W' u12 implies u21 W u22 on M(U, V). With
    congruence cores this is the second form for the cores.
    """
    m = m_matrices(a, u.core, v.core)
    u11, u12, u21, u22 = m.columns()
    hyp = w.core.bits[u11, u12]
    return all(bool(np.all(~hyp | b.bits[u21, u22])) for b in w.base)


def c_commutator(a: FiniteAlgebra, alpha: Partition, beta: Partition) -> Partition:
    """Least delta with C(alpha, beta; delta), as a finite fixpoint from the bottom."""
    m = m_matrices(a, alpha, beta)
    u11, u12, u21, u22 = m.columns()
    delta = Partition.bottom(a.size)
    while True:
        lab = delta.array
        sel = lab[u11] == lab[u12]
        pairs = zip(u21[sel].tolist(), u22[sel].tolist())
        nxt = cg(a, pairs, start=delta)
        if nxt == delta:
            return delta
        delta = nxt


def weak_c_commutator(a: FiniteAlgebra, alpha: Partition, beta: Partition) -> Partition:
    m = m_matrices(a, alpha, beta)
    u11, u12, u21, u22 = m.columns()
    sel = u11 == u12
    return cg(a, zip(u21[sel].tolist(), u22[sel].tolist()))


# --- Day-term route -------------------------------------------------------------------


def x_m_extract(witness: TermWitness, m: MatrixSubalgebra) -> BitRelation:
    """Pairs (m_i(a,b,d,c), m_i(a,a,c,c)) over the chain and matrices (a b; c d)."""
    if witness.kind != "day" or not witness.ok:
        raise WitnessError("x_m needs a verified Day witness")
    n = m.base_algebra.size
    if witness.chain[0].size != n:
        raise CarrierMismatch("witness and matrices live on different algebras")
    a_, b_, c_, d_ = m.columns()
    bits = np.zeros((n, n), dtype=bool)
    for t in witness.chain:
        bits[t(a_, b_, d_, c_), t(a_, a_, c_, c_)] = True
    return BitRelation(bits)


def commutator_via_xm(a: FiniteAlgebra, witness: TermWitness, alpha: Partition, beta: Partition) -> Partition:
    return cg(a, x_m_extract(witness, m_matrices(a, alpha, beta)))


# --- A(alpha) route -----------------------------------------------------------------------


def delta_alpha_beta(a: FiniteAlgebra, alpha: Partition, beta: Partition,
                     aa: Optional[AAlpha] = None) -> tuple[AAlpha, Partition]:
    """Delta_{alpha,beta}: Cg in A(alpha) of the pairs ((a,a),(b,b)) with a beta b."""
    if aa is None:
        aa = a_alpha(a, alpha)
    d = aa.delta.map
    pairs = [(int(d[x]), int(d[y])) for x, y in beta.pairs() if x < y]
    return aa, cg(aa.algebra, pairs)


def commutator_via_delta(a: FiniteAlgebra, alpha: Partition, beta: Partition) -> Partition:
    """Project kappa = (Delta_{alpha,beta} meet ker pi) join ker pi' along pi'.

    Raises CommutatorError if kappa is not the full pi'-preimage of a
    congruence of A, which would signal an input outside the modular setting.
    """
    aa, dab = delta_alpha_beta(a, alpha, beta)
    kappa = (dab & kernel(aa.pi)) | kernel(aa.pi_prime)
    uf = UnionFind(a.size)
    second = aa.pi_prime.map
    for i, lab in enumerate(kappa.labels):
        uf.union(int(second[i]), int(second[lab]))
    result = Partition(uf.labels())
    if aa.pi_prime.preimage_partition(result) != kappa:
        raise CommutatorError("kappa does not project along pi' to an equivalence")
    if not a.is_compatible(result):
        raise CommutatorError("projected relation is not a congruence")
    return result


ROUTES: dict[str, Callable] = {
    "tc": c_commutator,
    "weak": weak_c_commutator,
    "delta": commutator_via_delta,
}


def commutator(a: FiniteAlgebra, alpha: Partition, beta: Partition, method: str = "tc",
               witness: Optional[TermWitness] = None) -> Partition:
    if method == "xm":
        if witness is None:
            raise WitnessError("the xm route needs Day terms")
        return commutator_via_xm(a, witness, alpha, beta)
    try:
        return ROUTES[method](a, alpha, beta)
    except KeyError:
        raise ValueError(f"unknown commutator method {method!r}") from None


def all_routes(a: FiniteAlgebra, alpha: Partition, beta: Partition,
               witness: Optional[TermWitness]) -> dict[str, Partition]:
    out = {"tc": c_commutator(a, alpha, beta), "weak": weak_c_commutator(a, alpha, beta)}
    if witness is not None:
        out["xm"] = commutator_via_xm(a, witness, alpha, beta)
    out["delta"] = commutator_via_delta(a, alpha, beta)
    return out


# --- suites ----------------------------------------------------------------------------


@dataclass
class EquivalenceReport:
    statements: dict[str, bool]

    @property
    def consistent(self) -> bool:
        return len(set(self.statements.values())) == 1

    @property
    def value(self) -> Optional[bool]:
        vals = set(self.statements.values())
        return vals.pop() if len(vals) == 1 else None


def equivalence_suite(a: FiniteAlgebra, witness: TermWitness, alpha: Partition, beta: Partition,
                      delta: Partition) -> EquivalenceReport:
    """The six statements that characterize [alpha, beta] <= delta."""
    d = delta.relation()
    return EquivalenceReport({
        "X(alpha,beta)<=delta": x_m_extract(witness, m_matrices(a, alpha, beta)) <= d,
        "X(beta,alpha)<=delta": x_m_extract(witness, m_matrices(a, beta, alpha)) <= d,
        "C(alpha,beta;delta)": centralizes(a, alpha, beta, delta).holds,
        "C(beta,alpha;delta)": centralizes(a, beta, alpha, delta).holds,
        "weakC(alpha,beta;delta)": weak_centralizes(a, alpha, beta, delta).holds,
        "weakC(beta,alpha;delta)": weak_centralizes(a, beta, alpha, delta).holds,
    })


@dataclass
class PropertyReport:
    checks: dict[str, bool] = field(default_factory=dict)
    failures: dict[str, tuple] = field(default_factory=dict)
    counts: dict[str, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def record(self, name: str, ok: bool, example: tuple = ()) -> None:
        self.counts[name] = self.counts.get(name, 0) + 1
        if not ok and name not in self.failures:
            self.failures[name] = example
        self.checks[name] = self.checks.get(name, True) and ok


class CommutatorTable:
    """All commutators of an algebra, computed once per pair."""

    def __init__(self, a: FiniteAlgebra, witness: Optional[TermWitness] = None):
        self.algebra = a
        self.lattice = con_all(a)
        self.witness = witness
        self._cache: dict[tuple[Partition, Partition], Partition] = {}

    def __call__(self, alpha: Partition, beta: Partition) -> Partition:
        key = (alpha, beta)
        if key not in self._cache:
            if self.witness is not None:
                self._cache[key] = commutator_via_xm(self.algebra, self.witness, alpha, beta)
            else:
                self._cache[key] = c_commutator(self.algebra, alpha, beta)
        return self._cache[key]


def property_suite(a: FiniteAlgebra, witness: Optional[TermWitness] = None,
                   homs: Sequence[Homomorphism] = ()) -> PropertyReport:
    """Symmetry, monotonicity, [a,b] <= a meet b, additivity under permuting
    congruences, and [f^-1 a, f^-1 b] <= f^-1 [a,b] for each f into ``a``."""
    comm = CommutatorTable(a, witness)
    cons = comm.lattice.elements
    rep = PropertyReport()
    for x, y in itertools.product(cons, cons):
        c = comm(x, y)
        rep.record("symmetry", c == comm(y, x), (x, y))
        rep.record("below_meet", c <= (x & y), (x, y))
    for x, x2, y in itertools.product(cons, cons, cons):
        if x <= x2:
            rep.record("monotone", comm(x, y) <= comm(x2, y), (x, x2, y))
        if permute(x, x2):
            rep.record("additive", comm(x | x2, y) == (comm(x, y) | comm(x2, y)), (x, x2, y))
    for f in homs:
        if f.target is not a:
            raise CarrierMismatch("homomorphisms must map into the algebra")
        src = CommutatorTable(f.source)
        for x, y in itertools.product(cons, cons):
            lhs = src(f.preimage_partition(x), f.preimage_partition(y))
            rep.record("preimage", lhs <= f.preimage_partition(comm(x, y)), (f, x, y))
    return rep
