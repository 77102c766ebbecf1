"""Congruential uniformities: filters of congruences and ideal filters on Z."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import reduce
from typing import Callable, Iterable, Mapping, Optional, Union

from .algebra import FiniteAlgebra
from .commutator import c_commutator
from .partition import Partition
from .relations import CarrierMismatch, RelationFilter

INF = math.inf
Cap = Union[int, float]


# --- filters of congruences on a finite algebra -------------------------------------


class CongruenceFilter:
    """Filter in Con A given by a finite base; principal over the meet of the base."""

    def __init__(self, algebra: FiniteAlgebra, base: Iterable[Partition]):
        base = tuple(dict.fromkeys(base))
        if not base:
            raise ValueError("a filter base must be nonempty")
        for p in base:
            if p.carrier_size != algebra.size:
                raise CarrierMismatch("base congruence and algebra carriers differ")
            if not algebra.is_compatible(p):
                raise ValueError(f"{p} is not a congruence")
        self.algebra = algebra
        self.base = base
        self.generator = reduce(lambda x, y: x & y, base)

    @classmethod
    def principal(cls, algebra: FiniteAlgebra, alpha: Partition) -> "CongruenceFilter":
        return cls(algebra, [alpha])

    def __contains__(self, p: Partition) -> bool:
        return self.generator <= p

    def __eq__(self, other) -> bool:
        if not isinstance(other, CongruenceFilter):
            return NotImplemented
        return self.algebra is other.algebra and self.generator == other.generator

    def __hash__(self) -> int:
        return hash(self.generator)

    def __le__(self, other: "CongruenceFilter") -> bool:
        _same_algebra(self, other)
        return self.generator <= other.generator

    def __repr__(self) -> str:
        return f"CongruenceFilter({[str(p) for p in self.base]})"

    def uniformity(self) -> RelationFilter:
        """Ug F: the uniformity with the congruences of F as a base."""
        return RelationFilter([p.relation() for p in self.base])


def _same_algebra(f: CongruenceFilter, g: CongruenceFilter) -> None:
    if f.algebra is not g.algebra:
        raise ValueError("filters live on different algebras")


def cfilter_meet(f: CongruenceFilter, g: CongruenceFilter) -> CongruenceFilter:
    _same_algebra(f, g)
    return CongruenceFilter(f.algebra, [x & y for x in f.base for y in g.base])


def cfilter_join(f: CongruenceFilter, g: CongruenceFilter) -> CongruenceFilter:
    _same_algebra(f, g)
    return CongruenceFilter(f.algebra, [x | y for x in f.base for y in g.base])


def filter_commutator(f: CongruenceFilter, g: CongruenceFilter,
                      comm: Callable = c_commutator) -> CongruenceFilter:
    """[F, G] with base the commutators of base pairs."""
    _same_algebra(f, g)
    a = f.algebra
    return CongruenceFilter(a, [comm(a, x, y) for x in f.base for y in g.base])


@dataclass(frozen=True)
class CUCommUReport:
    left: Partition
    right: Partition
    holds: bool
    strict: bool


def cucommu_inequality_check(f: CongruenceFilter, g: CongruenceFilter,
                             comm: Callable = c_commutator) -> CUCommUReport:
    """[Ug F, Ug G] <= Ug [F, G], compared through the generators of both sides."""
    _same_algebra(f, g)
    left = comm(f.algebra, f.generator, g.generator)
    right = filter_commutator(f, g, comm).generator
    return CUCommUReport(left, right, left <= right, left != right)


# --- ideal filters on Z ------------------------------------------------------------


class ZParseError(ValueError):
    pass


def _factor(m: int) -> dict[int, int]:
    from sympy import factorint

    return {int(p): int(e) for p, e in factorint(m).items()}


def _isprime(p: int) -> bool:
    from sympy import isprime

    return bool(isprime(p))


def _cap_str(c: Cap) -> str:
    return "inf" if c == INF else str(int(c))


class ZIdealFilter:
    """Filter of ideals of Z given by caps: (d) belongs iff v_p(d) <= cap(p) for every prime p.

    Absent primes have cap 0. Filters are ordered by reverse inclusion, so a
    filter is lower when it contains more ideals, i.e. when its caps are larger.
    """

    __slots__ = ("caps",)

    def __init__(self, caps: Optional[Mapping[int, Cap]] = None):
        clean = {}
        for p, c in (caps or {}).items():
            p = int(p)
            if not _isprime(p):
                raise ValueError(f"{p} is not a prime")
            if c != INF:
                if c < 0 or int(c) != c:
                    raise ValueError(f"cap for {p} must be a natural number or inf")
                c = int(c)
            if c:
                clean[p] = c
        self.caps: tuple[tuple[int, Cap], ...] = tuple(sorted(clean.items()))

    @classmethod
    def principal(cls, n: int) -> "ZIdealFilter":
        if n == 0:
            raise ValueError("Fg{(0)} is not representable by caps")
        return cls(_factor(abs(n)) if abs(n) > 1 else {})

    @classmethod
    def power_filter(cls, m: int) -> "ZIdealFilter":
        """(m^inf) = Fg{(m^k) : k natural}; depends only on the primes dividing m."""
        if m <= 0:
            raise ValueError("(m^inf) needs a nonzero natural number m")
        return cls({p: INF for p in (_factor(m) if m > 1 else {})})

    def cap(self, p: int) -> Cap:
        return dict(self.caps).get(p, 0)

    def primes(self) -> list[int]:
        return [p for p, _ in self.caps]

    def __contains__(self, d: int) -> bool:
        if d == 0:
            return False
        d = abs(d)
        if d == 1:
            return True
        return all(e <= self.cap(p) for p, e in _factor(d).items())

    def __eq__(self, other) -> bool:
        if not isinstance(other, ZIdealFilter):
            return NotImplemented
        return self.caps == other.caps

    def __hash__(self) -> int:
        return hash(self.caps)

    def __le__(self, other: "ZIdealFilter") -> bool:
        return z_leq(self, other)

    def __repr__(self) -> str:
        return f"ZIdealFilter({self.canonical()})"

    def __str__(self) -> str:
        return self.canonical()

    def canonical(self) -> str:
        return "caps{" + ",".join(f"{p}:{_cap_str(c)}" for p, c in self.caps) + "}"

    def pretty(self) -> str:
        finite = math.prod(p**c for p, c in self.caps if c != INF)
        infinite = math.prod(p for p, c in self.caps if c == INF)
        parts = []
        if finite > 1 or infinite == 1:
            parts.append(f"({finite})")
        if infinite > 1:
            parts.append(f"{infinite}^inf")
        return "&".join(parts)


def _pointwise(a: ZIdealFilter, b: ZIdealFilter, f) -> ZIdealFilter:
    primes = set(a.primes()) | set(b.primes())
    return ZIdealFilter({p: f(a.cap(p), b.cap(p)) for p in primes})


def z_meet(a: ZIdealFilter, b: ZIdealFilter) -> ZIdealFilter:
    return _pointwise(a, b, max)


def z_join(a: ZIdealFilter, b: ZIdealFilter) -> ZIdealFilter:
    return _pointwise(a, b, min)


def z_commutator(a: ZIdealFilter, b: ZIdealFilter) -> ZIdealFilter:
    """Base of pairwise ideal products, so caps add."""
    return _pointwise(a, b, lambda x, y: x + y)


def z_leq(a: ZIdealFilter, b: ZIdealFilter) -> bool:
    return all(a.cap(p) >= b.cap(p) for p in set(a.primes()) | set(b.primes()))


_Z_ATOM = re.compile(r"^\(\s*(\d+)\s*\)$|^(\d+)\s*\^\s*inf$")


def z_parse(text: str) -> ZIdealFilter:
    """Parse atoms ``(n)`` and ``m^inf`` joined by ``&`` (combined by meet)."""
    atoms = text.split("&")
    out = None
    for atom in atoms:
        atom = atom.strip()
        m = _Z_ATOM.match(atom)
        if not m:
            raise ZParseError(f"bad ideal filter atom {atom!r} in {text!r}")
        if m.group(1) is not None:
            n = int(m.group(1))
            if n == 0:
                raise ZParseError("(0) is not allowed; use a nonzero natural number")
            f = ZIdealFilter.principal(n)
        else:
            k = int(m.group(2))
            if k == 0:
                raise ZParseError("m^inf needs a nonzero natural number m")
            f = ZIdealFilter.power_filter(k)
        out = f if out is None else z_meet(out, f)
    return out


_CAPS_RE = re.compile(r"^caps\{(.*)\}$")


def parse_caps(text: str) -> ZIdealFilter:
    """Inverse of :meth:`ZIdealFilter.canonical`."""
    m = _CAPS_RE.match(text.strip())
    if not m:
        raise ZParseError(f"not a caps literal: {text!r}")
    caps = {}
    body = m.group(1).strip()
    for item in filter(None, (s.strip() for s in body.split(","))):
        km = re.fullmatch(r"(\d+):(\d+|inf)", item)
        if not km:
            raise ZParseError(f"bad caps entry {item!r}")
        caps[int(km.group(1))] = INF if km.group(2) == "inf" else int(km.group(2))
    try:
        return ZIdealFilter(caps)
    except ValueError as exc:
        raise ZParseError(str(exc)) from exc
