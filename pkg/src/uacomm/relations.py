"""Binary relations on finite carriers and finitely based filters of relations."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

MAX_CARRIER = 64
# relations also live on A(alpha), which can have MAX_CARRIER**2 elements
MAX_RELATION_CARRIER = MAX_CARRIER**2


class CarrierMismatch(ValueError):
    pass


class NotInFilter(ValueError):
    pass


class RelationParseError(ValueError):
    pass


def _check_size(n: int, cap: Optional[int] = None) -> None:
    cap = MAX_RELATION_CARRIER if cap is None else cap
    if n < 1:
        raise ValueError(f"carrier size must be positive, got {n}")
    if n > cap:
        raise ValueError(f"carrier size {n} exceeds cap {cap}")


class BitRelation:
    """An immutable relation on {0..n-1}, stored as an n x n boolean matrix."""

    __slots__ = ("bits", "_key")

    def __init__(self, bits, cap: Optional[int] = None):
        arr = np.array(bits, dtype=bool)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("relation bits must be a square matrix")
        _check_size(arr.shape[0], cap)
        arr.setflags(write=False)
        self.bits = arr
        self._key = None

    @property
    def carrier_size(self) -> int:
        return self.bits.shape[0]

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "BitRelation":
        bits = np.zeros((n, n), dtype=bool)
        for i, j in pairs:
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"pair ({i},{j}) outside carrier of size {n}")
            bits[i, j] = True
        return cls(bits)

    @classmethod
    def diagonal(cls, n: int) -> "BitRelation":
        return cls(np.eye(n, dtype=bool))

    @classmethod
    def full(cls, n: int) -> "BitRelation":
        return cls(np.ones((n, n), dtype=bool))

    @classmethod
    def empty(cls, n: int) -> "BitRelation":
        return cls(np.zeros((n, n), dtype=bool))

    def pairs(self) -> list[tuple[int, int]]:
        return [(int(i), int(j)) for i, j in zip(*np.nonzero(self.bits))]

    def __contains__(self, pair) -> bool:
        i, j = pair
        return bool(self.bits[i, j])

    def __len__(self) -> int:
        return int(self.bits.sum())

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitRelation):
            return NotImplemented
        return self.bits.shape == other.bits.shape and bool(np.array_equal(self.bits, other.bits))

    def __hash__(self) -> int:
        if self._key is None:
            self._key = hash((self.carrier_size, self.bits.tobytes()))
        return self._key

    def __le__(self, other: "BitRelation") -> bool:
        _same_carrier(self, other)
        return bool(np.all(~self.bits | other.bits))

    def __ge__(self, other: "BitRelation") -> bool:
        return other <= self

    def __and__(self, other: "BitRelation") -> "BitRelation":
        _same_carrier(self, other)
        return BitRelation(self.bits & other.bits)

    def __or__(self, other: "BitRelation") -> "BitRelation":
        _same_carrier(self, other)
        return BitRelation(self.bits | other.bits)

    def __matmul__(self, other: "BitRelation") -> "BitRelation":
        return compose(self, other)

    def is_reflexive(self) -> bool:
        return bool(self.bits.diagonal().all())

    def is_symmetric(self) -> bool:
        return bool(np.array_equal(self.bits, self.bits.T))

    def is_transitive(self) -> bool:
        return compose(self, self) <= self

    def is_equivalence(self) -> bool:
        return self.is_reflexive() and self.is_symmetric() and self.is_transitive()

    def power(self, k: int) -> "BitRelation":
        if k < 1:
            raise ValueError("relational power needs k >= 1")
        out = self
        for _ in range(k - 1):
            out = compose(out, self)
        return out

    def __repr__(self) -> str:
        return format_relation(self)


def _same_carrier(r: BitRelation, s: BitRelation) -> None:
    if r.carrier_size != s.carrier_size:
        raise CarrierMismatch(f"carrier sizes differ: {r.carrier_size} vs {s.carrier_size}")


def compose(r: BitRelation, s: BitRelation) -> BitRelation:
    """Relational product: i (r;s) k iff i r j and j s k for some j."""
    _same_carrier(r, s)
    return BitRelation(r.bits @ s.bits)


def inverse(r: BitRelation) -> BitRelation:
    return BitRelation(r.bits.T)


def equivalence_closure(r: BitRelation) -> BitRelation:
    n = r.carrier_size
    m = r.bits | r.bits.T | np.eye(n, dtype=bool)
    while True:
        nxt = m @ m
        if np.array_equal(nxt, m):
            return BitRelation(m)
        m = nxt


# --- text format -----------------------------------------------------------

_REL_RE = re.compile(r"^\s*rel\s+(\d+)\s*(\+diag)?\s*\{(.*)\}\s*$", re.S)
_PAIR_RE = re.compile(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)")


def parse_relation(text: str) -> BitRelation:
    """Parse ``rel <n> [+diag] { (i,j) ... }``."""
    m = _REL_RE.match(text)
    if not m:
        raise RelationParseError(f"not a relation literal: {text!r}")
    n = int(m.group(1))
    body = m.group(3)
    pairs = [(int(a), int(b)) for a, b in _PAIR_RE.findall(body)]
    leftover = _PAIR_RE.sub("", body).strip()
    if leftover:
        raise RelationParseError(f"unexpected text in relation body: {leftover!r}")
    try:
        rel = BitRelation.from_pairs(n, pairs)
    except ValueError as exc:
        raise RelationParseError(str(exc)) from exc
    if m.group(2):
        rel = rel | BitRelation.diagonal(n)
    return rel


def format_relation(r: BitRelation) -> str:
    body = " ".join(f"({i},{j})" for i, j in r.pairs())
    return f"rel {r.carrier_size} {{ {body} }}" if body else f"rel {r.carrier_size} {{ }}"


# --- filters ---------------------------------------------------------------


@dataclass(frozen=True)
class AxiomReport:
    U1: bool
    U2: bool
    U3: bool
    U4: bool
    U5: bool

    @property
    def semiuniformity(self) -> bool:
        return self.U1 and self.U2 and self.U3 and self.U4

    @property
    def uniformity(self) -> bool:
        return self.semiuniformity and self.U5


class RelationFilter:
    """Filter of relations on a finite carrier, given by a finite base.

    Membership is ``U >= meet of the base``; on a finite carrier that meet
    (the core) is the single canonical witness, so equality of filters is
    equality of cores. Ordering follows reverse inclusion: a filter is below
    another when it contains more relations, i.e. when its core is smaller.
    """

    __slots__ = ("carrier_size", "base", "_core")

    def __init__(self, base: Sequence[BitRelation], carrier_size: Optional[int] = None):
        base = tuple(base)
        if not base:
            raise ValueError("a filter base must be nonempty")
        n = base[0].carrier_size if carrier_size is None else carrier_size
        for b in base:
            if b.carrier_size != n:
                raise CarrierMismatch("base relations live on different carriers")
        self.carrier_size = n
        self.base = base
        core = base[0].bits
        for b in base[1:]:
            core = core & b.bits
        self._core = BitRelation(core)

    @classmethod
    def principal(cls, r: BitRelation) -> "RelationFilter":
        return cls([r])

    @property
    def core(self) -> BitRelation:
        return self._core

    def __contains__(self, r: BitRelation) -> bool:
        return self._core <= r

    def __eq__(self, other) -> bool:
        if not isinstance(other, RelationFilter):
            return NotImplemented
        return self._core == other._core

    def __hash__(self) -> int:
        return hash(self._core)

    def __le__(self, other: "RelationFilter") -> bool:
        _same_filter_carrier(self, other)
        return self._core <= other._core

    def __ge__(self, other: "RelationFilter") -> bool:
        return other <= self

    def __repr__(self) -> str:
        return f"RelationFilter(base={list(self.base)!r})"


def _same_filter_carrier(f: RelationFilter, g: RelationFilter) -> None:
    if f.carrier_size != g.carrier_size:
        raise CarrierMismatch(f"carrier sizes differ: {f.carrier_size} vs {g.carrier_size}")


def check_axioms(f: RelationFilter) -> AxiomReport:
    core = f.core
    n = f.carrier_size
    u3 = all(BitRelation.diagonal(n) <= b for b in f.base)
    u4 = all(core <= inverse(b) for b in f.base)
    cc = compose(core, core)
    u5 = all(cc <= b for b in f.base)
    return AxiomReport(True, True, u3, u4, u5)


def filter_meet(f: RelationFilter, g: RelationFilter) -> RelationFilter:
    _same_filter_carrier(f, g)
    return RelationFilter(_unique(u & v for u in f.base for v in g.base))


def filter_join(f: RelationFilter, g: RelationFilter) -> RelationFilter:
    _same_filter_carrier(f, g)
    return RelationFilter(_unique(u | v for u in f.base for v in g.base))


def circ_filter(f: RelationFilter, g: RelationFilter) -> RelationFilter:
    _same_filter_carrier(f, g)
    return RelationFilter(_unique(compose(u, v) for u in f.base for v in g.base))


def inverse_filter(f: RelationFilter) -> RelationFilter:
    return RelationFilter([inverse(b) for b in f.base])


def _unique(rels: Iterable[BitRelation]) -> list[BitRelation]:
    out, seen = [], set()
    for r in rels:
        if r not in seen:
            seen.add(r)
            out.append(r)
    return out


def uniformity_join(f: RelationFilter, g: RelationFilter) -> RelationFilter:
    """Join in the lattice of uniformities on the bare set.

    Both inputs must be uniformities; their cores are then equivalence
    relations and the least uniformity above both is principal over the
    equivalence relation they generate.
    """
    for h in (f, g):
        if not check_axioms(h).uniformity:
            raise ValueError("uniformity_join needs uniformities")
    return RelationFilter([equivalence_closure(f.core | g.core)])


def semipermute_join_check(f: RelationFilter, g: RelationFilter) -> bool:
    """True iff (f v g == f o g) <=> (g o f <= f o g) holds for this pair."""
    for h in (f, g):
        if not check_axioms(h).uniformity:
            raise ValueError("semipermute_join_check needs uniformities")
    fg = circ_filter(f, g)
    lhs = uniformity_join(f, g) == fg
    rhs = circ_filter(g, f) <= fg
    return lhs == rhs


def nth_root(u: BitRelation, n: int, f: RelationFilter, max_subset: int = 8) -> Optional[BitRelation]:
    """Some finite intersection V of base elements with V^n contained in u.

    Returns None when u is not a member of f. Subsets of the base are tried
    by increasing size; the full-base intersection is the fallback.
    """
    if n < 1:
        raise ValueError("root order must be positive")
    if u.carrier_size != f.carrier_size:
        raise CarrierMismatch("relation and filter live on different carriers")
    if u not in f:
        return None
    if len(f.base) <= max_subset:
        for size in range(1, len(f.base) + 1):
            for combo in itertools.combinations(f.base, size):
                v = combo[0]
                for w in combo[1:]:
                    v = v & w
                if v.power(n) <= u:
                    return v
    v = f.core
    if v.power(n) <= u:
        return v
    return None
