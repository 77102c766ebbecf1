"""Finite algebras given by operation tables, terms, subpowers and homomorphisms."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple, Optional, Sequence, Union

import numpy as np

from .partition import Partition
from .relations import MAX_CARRIER, BitRelation, CarrierMismatch, RelationFilter

# n**k for subpowers; exceeding it is an error, never a truncation
POWER_CAP = 10**7
# total entries of a materialized operation table
TABLE_CAP = 2 * 10**7
# candidate tuples evaluated per numpy batch
_CHUNK = 1 << 20


class CapExceeded(ValueError):
    pass


class AlgebraError(ValueError):
    pass


# --- signature and algebra -------------------------------------------------


@dataclass(frozen=True)
class Signature:
    ops: tuple[tuple[str, int], ...]

    def __post_init__(self):
        names = [name for name, _ in self.ops]
        if len(set(names)) != len(names):
            raise AlgebraError(f"duplicate operation names in {names}")
        for name, arity in self.ops:
            if arity < 0:
                raise AlgebraError(f"negative arity for {name}")

    def arity(self, name: str) -> int:
        for op, ar in self.ops:
            if op == name:
                return ar
        raise KeyError(name)

    @property
    def names(self) -> list[str]:
        return [name for name, _ in self.ops]

    def __iter__(self):
        return iter(self.ops)


class FiniteAlgebra:
    """Carrier {0..n-1} with total operation tables.

    ``tables[name]`` is an integer array of shape ``(n,) * arity``.
    Algebras compare by identity; use :meth:`same_tables` for structure.
    """

    def __init__(self, signature, size: int, tables: dict, name: str = "A",
                 cap: Optional[int] = MAX_CARRIER):
        if not isinstance(signature, Signature):
            signature = Signature(tuple((str(n), int(a)) for n, a in signature))
        if size < 1:
            raise AlgebraError("carrier must be nonempty")
        if cap is not None and size > cap:
            raise CapExceeded(f"carrier size {size} exceeds cap {cap}")
        self.signature = signature
        self.size = size
        self.name = name
        self.tables: dict[str, np.ndarray] = {}
        for op, arity in signature:
            if op not in tables:
                raise AlgebraError(f"missing table for operation {op}")
            t = np.array(tables[op], dtype=np.int64)
            if t.size != size**arity:
                raise AlgebraError(f"table for {op}/{arity} has {t.size} entries, expected {size**arity}")
            t = t.reshape((size,) * arity)
            if t.size and (t.min() < 0 or t.max() >= size):
                raise AlgebraError(f"table for {op} has entries outside the carrier")
            t.setflags(write=False)
            self.tables[op] = t
        extra = set(tables) - set(signature.names)
        if extra:
            raise AlgebraError(f"tables given for unknown operations {sorted(extra)}")

    def __repr__(self) -> str:
        ops = ", ".join(f"{n}/{a}" for n, a in self.signature)
        return f"FiniteAlgebra({self.name!r}, n={self.size}, ops=[{ops}])"

    def __len__(self) -> int:
        return self.size

    @property
    def elements(self) -> range:
        return range(self.size)

    def arity(self, op: str) -> int:
        return self.signature.arity(op)

    def apply(self, op: str, *args: int) -> int:
        return int(self.tables[op][tuple(args)])

    def same_tables(self, other: "FiniteAlgebra") -> bool:
        return (self.signature == other.signature and self.size == other.size
                and all(np.array_equal(self.tables[o], other.tables[o]) for o in self.signature.names))

    @cached_property
    def translations(self) -> list[np.ndarray]:
        """Unary polynomial translations from basic operations, as (n, m) arrays.

        Column j of an entry is one translation x -> op(c_1..x..c_r).
        """
        out = []
        n = self.size
        for op, arity in self.signature:
            t = self.tables[op]
            for pos in range(arity):
                out.append(np.ascontiguousarray(np.moveaxis(t, pos, 0).reshape(n, -1)))
        return out

    def is_compatible(self, rel: Union[BitRelation, Partition]) -> bool:
        """Whether every basic operation maps coordinatewise related tuples to related results."""
        r = rel.relation() if isinstance(rel, Partition) else rel
        return all(relation_image(self, op, r) <= r for op in self.signature.names)


# --- terms -----------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    index: int

    def __str__(self) -> str:
        return f"x{self.index}"

    def depth(self) -> int:
        return 0

    def max_var(self) -> int:
        return self.index


@dataclass(frozen=True)
class App:
    op: str
    args: tuple = ()

    def __str__(self) -> str:
        if not self.args:
            return self.op
        return "(" + " ".join([self.op] + [str(a) for a in self.args]) + ")"

    def depth(self) -> int:
        return 1 + max((a.depth() for a in self.args), default=0)

    def max_var(self) -> int:
        return max((a.max_var() for a in self.args), default=-1)


Term = Union[Var, App]


class TermParseError(ValueError):
    pass


_TERM_TOKEN = re.compile(r"\(|\)|[^\s()]+")


def parse_term(text: str, signature: Optional[Signature] = None) -> Term:
    """Parse prefix notation like ``(p x0 (p x0 x1 x2) x3)``."""
    tokens = _TERM_TOKEN.findall(text)
    pos = 0

    def atom(tok: str) -> Term:
        if re.fullmatch(r"x\d+", tok):
            return Var(int(tok[1:]))
        if signature is not None:
            try:
                ar = signature.arity(tok)
            except KeyError:
                raise TermParseError(f"unknown operation {tok!r}") from None
            if ar != 0:
                raise TermParseError(f"operation {tok!r} has arity {ar}, used as a constant")
        return App(tok, ())

    def parse() -> Term:
        nonlocal pos
        if pos >= len(tokens):
            raise TermParseError("unexpected end of term")
        tok = tokens[pos]
        pos += 1
        if tok == ")":
            raise TermParseError("unexpected ')'")
        if tok != "(":
            return atom(tok)
        if pos >= len(tokens) or tokens[pos] in "()":
            raise TermParseError("expected operation name after '('")
        op = tokens[pos]
        pos += 1
        args = []
        while pos < len(tokens) and tokens[pos] != ")":
            args.append(parse())
        if pos >= len(tokens):
            raise TermParseError("missing ')'")
        pos += 1
        if signature is not None:
            try:
                ar = signature.arity(op)
            except KeyError:
                raise TermParseError(f"unknown operation {op!r}") from None
            if ar != len(args):
                raise TermParseError(f"operation {op!r} has arity {ar}, got {len(args)} arguments")
        return App(op, tuple(args))

    term = parse()
    if pos != len(tokens):
        raise TermParseError(f"trailing tokens after term: {tokens[pos:]}")
    return term


def substitute(t: Term, args: Sequence[Term]) -> Term:
    """Replace variable i by ``args[i]``."""
    if isinstance(t, Var):
        return args[t.index]
    return App(t.op, tuple(substitute(s, args) for s in t.args))


def eval_term(a: FiniteAlgebra, t: Term, env: Sequence[int]) -> int:
    if isinstance(t, Var):
        if t.index >= len(env):
            raise AlgebraError(f"variable x{t.index} out of range for environment of length {len(env)}")
        return int(env[t.index])
    if t.op not in a.tables:
        raise AlgebraError(f"unknown operation {t.op!r}")
    arity = a.arity(t.op)
    if arity != len(t.args):
        raise AlgebraError(f"{t.op} has arity {arity}, got {len(t.args)} arguments")
    vals = tuple(eval_term(a, s, env) for s in t.args)
    return int(a.tables[t.op][vals])


def term_table(a: FiniteAlgebra, t: Term, k: int) -> np.ndarray:
    """Flat table of the k-ary term operation, tuples in lexicographic order."""
    if t.max_var() >= k:
        raise AlgebraError(f"term uses x{t.max_var()} but arity is {k}")
    grid = [g.ravel() for g in np.indices((a.size,) * k)] if k else []
    size = a.size**k

    def ev(s: Term) -> np.ndarray:
        if isinstance(s, Var):
            return grid[s.index]
        if a.arity(s.op) != len(s.args):
            raise AlgebraError(f"{s.op} has arity {a.arity(s.op)}, got {len(s.args)} arguments")
        if not s.args:
            return np.full(size, a.tables[s.op][()], dtype=np.int64)
        return a.tables[s.op][tuple(ev(x) for x in s.args)]

    return ev(t)


# --- products of tuple pools ------------------------------------------------


def _apply_products(table: np.ndarray, pools: Sequence[np.ndarray]) -> Iterator[np.ndarray]:
    """Apply an r-ary table coordinatewise to every r-tuple drawn from the pools.

    Each pool is an (m_i, k) array of k-tuples; yields (batch, k) result arrays.
    """
    if any(len(p) == 0 for p in pools):
        return
    r = len(pools)
    rest = 1
    for p in pools[1:]:
        rest *= len(p)
    step = max(1, _CHUNK // max(rest, 1))
    first = pools[0]
    for start in range(0, len(first), step):
        parts = [first[start:start + step]] + list(pools[1:])
        idx = []
        for i, p in enumerate(parts):
            shape = [1] * r + [p.shape[1]]
            shape[i] = len(p)
            idx.append(p.reshape(shape))
        out = table[tuple(idx)]
        yield out.reshape(-1, first.shape[1])


def close_tuples(a: FiniteAlgebra, gens, k: Optional[int] = None, cap: int = POWER_CAP) -> np.ndarray:
    """Subuniverse of A^k generated by the given k-tuples (worklist closure).

    Returns the sorted lexicographic codes of the generated tuples.
    """
    gens = np.asarray(gens, dtype=np.int64)
    if k is None:
        k = gens.shape[1] if gens.ndim == 2 else 1
    gens = gens.reshape(-1, k)
    n = a.size
    total = n**k
    if total > cap:
        raise CapExceeded(f"power A^{k} has {total} elements, cap is {cap}")
    weights = n ** np.arange(k - 1, -1, -1, dtype=np.int64)
    seen = np.zeros(total, dtype=bool)
    count = 0

    def fresh(cands: np.ndarray) -> np.ndarray:
        nonlocal count
        codes = cands @ weights
        keep = np.flatnonzero(~seen[codes])
        if not keep.size:
            return cands[:0]
        codes, idx = np.unique(codes[keep], return_index=True)
        seen[codes] = True
        count += len(codes)
        return cands[keep[idx]]

    found = [fresh(gens)]
    for op, arity in a.signature:
        if arity == 0:
            found.append(fresh(np.full((1, k), a.tables[op][()], dtype=np.int64)))
    frontier = np.concatenate(found) if found else np.zeros((0, k), dtype=np.int64)
    elems = frontier
    ops = [(a.tables[op], arity) for op, arity in a.signature if arity > 0]
    while len(frontier):
        old = elems[: len(elems) - len(frontier)]
        new_parts = []
        for table, arity in ops:
            for p in range(arity):
                pools = [old] * p + [frontier] + [elems] * (arity - p - 1)
                for batch in _apply_products(table, pools):
                    got = fresh(batch)
                    if len(got):
                        new_parts.append(got)
                    if count == total:
                        # nothing left to generate: the whole power
                        return np.arange(total, dtype=np.int64)
        frontier = np.concatenate(new_parts) if new_parts else np.zeros((0, k), dtype=np.int64)
        elems = np.concatenate([elems, frontier])
    return np.flatnonzero(seen)


def decode(codes: np.ndarray, n: int, k: int) -> np.ndarray:
    """Lexicographic codes back to (m, k) tuples."""
    codes = np.asarray(codes, dtype=np.int64)
    out = np.empty((len(codes), k), dtype=np.int64)
    rem = codes.copy()
    for i in range(k - 1, -1, -1):
        out[:, i] = rem % n
        rem //= n
    return out


def encode(tuples, n: int) -> np.ndarray:
    tuples = np.asarray(tuples, dtype=np.int64)
    k = tuples.shape[1]
    return tuples @ (n ** np.arange(k - 1, -1, -1, dtype=np.int64))


def subalgebra_generate(a: FiniteAlgebra, gens: Iterable[int]) -> frozenset[int]:
    gens = sorted(set(int(g) for g in gens))
    for g in gens:
        if not 0 <= g < a.size:
            raise AlgebraError(f"generator {g} outside carrier")
    if not gens and all(ar > 0 for _, ar in a.signature):
        raise AlgebraError("empty generating set and no constants")
    codes = close_tuples(a, np.array(gens, dtype=np.int64).reshape(-1, 1), k=1)
    return frozenset(int(c) for c in codes)


def subpower(a: FiniteAlgebra, tuples: np.ndarray, name: str = "S",
             table_cap: int = TABLE_CAP) -> FiniteAlgebra:
    """The subalgebra of A^k on the given (closed) set of k-tuples.

    Elements are indexed in lexicographic order of the tuples.
    """
    tuples = np.asarray(tuples, dtype=np.int64)
    m, k = tuples.shape
    codes = encode(tuples, a.size)
    order = np.argsort(codes)
    tuples, codes = tuples[order], codes[order]
    tables = {}
    for op, arity in a.signature:
        if m**arity > table_cap:
            raise CapExceeded(f"table for {op} would have {m**arity} entries, cap is {table_cap}")
        t = a.tables[op]
        if arity == 0:
            res = np.full((1, k), t[()], dtype=np.int64)
        else:
            idx = []
            for i in range(arity):
                shape = [1] * arity + [k]
                shape[i] = m
                idx.append(tuples.reshape(shape))
            res = t[tuple(idx)].reshape(-1, k)
        rc = encode(res, a.size)
        pos = np.searchsorted(codes, rc)
        if np.any(pos >= m) or np.any(codes[np.minimum(pos, m - 1)] != rc):
            raise AlgebraError("tuple set is not closed under the operations")
        tables[op] = pos.reshape((m,) * arity)
    return FiniteAlgebra(a.signature, m, tables, name=name, cap=None)


def power(a: FiniteAlgebra, k: int, cap: int = POWER_CAP, table_cap: int = TABLE_CAP) -> FiniteAlgebra:
    if k < 1:
        raise AlgebraError("power exponent must be positive")
    total = a.size**k
    if total > cap:
        raise CapExceeded(f"power A^{k} has {total} elements, cap is {cap}")
    tuples = decode(np.arange(total), a.size, k)
    return subpower(a, tuples, name=f"{a.name}^{k}", table_cap=table_cap)


# --- relations under operations ----------------------------------------------


def relation_image(a: FiniteAlgebra, op: str, rel: BitRelation) -> BitRelation:
    """{(op(x), op(y)) : x_i rel y_i for every i}."""
    n = a.size
    if rel.carrier_size != n:
        raise CarrierMismatch("relation and algebra carriers differ")
    arity = a.arity(op)
    t = a.tables[op]
    bits = np.zeros((n, n), dtype=bool)
    if arity == 0:
        c = t[()]
        bits[c, c] = True
        return BitRelation(bits)
    pairs = np.array(rel.pairs(), dtype=np.int64).reshape(-1, 2)
    for batch in _apply_products(t, [pairs] * arity):
        bits[batch[:, 0], batch[:, 1]] = True
    return BitRelation(bits)


def filter_is_compatible(a: FiniteAlgebra, f: RelationFilter) -> bool:
    """Each base U admits a filter member whose operation image lies in U.

    On a finite carrier the best approximant is the core, so this reduces to
    op(core) <= U for every base element and basic operation.
    """
    if f.carrier_size != a.size:
        raise CarrierMismatch("filter and algebra carriers differ")
    if not f.core.is_reflexive():
        return False
    images = [relation_image(a, op, f.core) for op in a.signature.names]
    return all(img <= u for u in f.base for img in images)


# --- homomorphisms ----------------------------------------------------------


class HomomorphismError(ValueError):
    pass


class Homomorphism:
    def __init__(self, source: FiniteAlgebra, target: FiniteAlgebra, mapping: Sequence[int],
                 check: bool = True):
        m = np.array(mapping, dtype=np.int64)
        if m.shape != (source.size,):
            raise HomomorphismError("map must be defined on every source element")
        if m.size and (m.min() < 0 or m.max() >= target.size):
            raise HomomorphismError("map leaves the target carrier")
        m.setflags(write=False)
        self.source = source
        self.target = target
        self.map = m
        if check:
            bad = self.violation()
            if bad is not None:
                raise HomomorphismError(f"not a homomorphism: fails on operation {bad}")

    def violation(self) -> Optional[str]:
        if self.source.signature != self.target.signature:
            return "<signature mismatch>"
        m = self.map
        for op, arity in self.source.signature:
            ta, tb = self.source.tables[op], self.target.tables[op]
            lhs = m[ta]
            rhs = tb[np.ix_(*([m] * arity))] if arity else tb
            if not np.array_equal(lhs, rhs):
                return op
        return None

    def __call__(self, x: int) -> int:
        return int(self.map[x])

    def __repr__(self) -> str:
        return f"Homomorphism({self.source.name} -> {self.target.name}, {self.map.tolist()})"

    @classmethod
    def identity(cls, a: FiniteAlgebra) -> "Homomorphism":
        return cls(a, a, range(a.size), check=False)

    def then(self, g: "Homomorphism") -> "Homomorphism":
        if g.source is not self.target:
            raise HomomorphismError("composition across different algebras")
        return Homomorphism(self.source, g.target, g.map[self.map], check=False)

    def image_relation(self, u: BitRelation) -> BitRelation:
        if u.carrier_size != self.source.size:
            raise CarrierMismatch("relation does not live on the source")
        bits = np.zeros((self.target.size,) * 2, dtype=bool)
        i, j = np.nonzero(u.bits)
        bits[self.map[i], self.map[j]] = True
        return BitRelation(bits)

    def preimage_relation(self, u: BitRelation) -> BitRelation:
        if u.carrier_size != self.target.size:
            raise CarrierMismatch("relation does not live on the target")
        return BitRelation(u.bits[np.ix_(self.map, self.map)])

    def preimage_partition(self, p: Partition) -> Partition:
        return Partition(p.array[self.map])


def preimage_filter(f: Homomorphism, u: RelationFilter) -> RelationFilter:
    if u.carrier_size != f.target.size:
        raise CarrierMismatch("filter does not live on the target")
    return RelationFilter([f.preimage_relation(b) for b in u.base])


class AAlpha(NamedTuple):
    algebra: FiniteAlgebra
    pairs: np.ndarray
    pi: Homomorphism
    pi_prime: Homomorphism
    delta: Homomorphism

    def index(self, x: int, y: int) -> int:
        code = x * self.pi.target.size + y
        codes = self.pairs[:, 0] * self.pi.target.size + self.pairs[:, 1]
        pos = int(np.searchsorted(codes, code))
        if pos >= len(codes) or codes[pos] != code:
            raise KeyError((x, y))
        return pos


def a_alpha(a: FiniteAlgebra, alpha: Partition) -> AAlpha:
    """A(alpha): the subalgebra of A^2 of alpha-related pairs, with pi, pi', Delta_alpha."""
    if alpha.carrier_size != a.size:
        raise CarrierMismatch("partition and algebra carriers differ")
    if not a.is_compatible(alpha):
        raise AlgebraError("alpha is not a congruence of the algebra")
    pairs = np.array(alpha.pairs(), dtype=np.int64).reshape(-1, 2)
    pairs = pairs[np.argsort(encode(pairs, a.size))]
    aa = subpower(a, pairs, name=f"{a.name}({alpha})")
    pi = Homomorphism(aa, a, pairs[:, 0])
    pi_prime = Homomorphism(aa, a, pairs[:, 1])
    codes = encode(pairs, a.size)
    diag = np.searchsorted(codes, np.arange(a.size) * (a.size + 1))
    delta = Homomorphism(a, aa, diag)
    return AAlpha(aa, pairs, pi, pi_prime, delta)


def l_f_base(f: Homomorphism, u: BitRelation) -> BitRelation:
    """Union over all n, n', t of L_{f,n,n',t}(u).

    The pairs (t(b, f(a)), t(b, f(a'))) with a u a' are exactly the
    subalgebra of B^2 generated by the diagonal of B and the image f(u).
    """
    if u.carrier_size != f.source.size:
        raise CarrierMismatch("relation does not live on the source")
    if not u.is_reflexive():
        raise ValueError("l_f_base needs a reflexive relation")
    b = f.target
    img = np.array(f.image_relation(u).pairs(), dtype=np.int64).reshape(-1, 2)
    diag = np.repeat(np.arange(b.size, dtype=np.int64)[:, None], 2, axis=1)
    codes = close_tuples(b, np.concatenate([diag, img]), k=2)
    bits = np.zeros(b.size * b.size, dtype=bool)
    bits[codes] = True
    return BitRelation(bits.reshape(b.size, b.size))


# --- text format -------------------------------------------------------------


class AlgebraParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def _tokens(text: str) -> list[tuple[str, int, int]]:
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0]
        for m in re.finditer(r"\S+", line):
            out.append((m.group(), lineno, m.start() + 1))
    return out


def parse_algebra(text: str) -> FiniteAlgebra:
    """Parse the line-oriented ``algebra/carrier/op`` format."""
    toks = _tokens(text)
    pos = 0
    last = (1, 1)

    def take(what: str) -> tuple[str, int, int]:
        nonlocal pos
        if pos >= len(toks):
            raise AlgebraParseError(f"unexpected end of input, expected {what}", *last)
        tok = toks[pos]
        pos += 1
        return tok

    def expect_kw(kw: str) -> None:
        tok, ln, col = take(repr(kw))
        if tok != kw:
            raise AlgebraParseError(f"expected {kw!r}, got {tok!r}", ln, col)

    def take_int(what: str) -> int:
        tok, ln, col = take(what)
        if not re.fullmatch(r"\d+", tok):
            raise AlgebraParseError(f"expected {what}, got {tok!r}", ln, col)
        return int(tok)

    if toks:
        last = toks[-1][1:]
    expect_kw("algebra")
    name = take("algebra name")[0]
    expect_kw("carrier")
    tok_n = toks[pos] if pos < len(toks) else None
    n = take_int("carrier size")
    if n < 1:
        raise AlgebraParseError("carrier size must be positive", tok_n[1], tok_n[2])
    ops, tables = [], {}
    while pos < len(toks):
        expect_kw("op")
        spec, ln, col = take("op name/arity")
        m = re.fullmatch(r"([^/\s]+)/(\d+)", spec)
        if not m:
            raise AlgebraParseError(f"expected name/arity, got {spec!r}", ln, col)
        op, arity = m.group(1), int(m.group(2))
        if op in tables:
            raise AlgebraParseError(f"duplicate operation {op!r}", ln, col)
        vals = []
        for _ in range(n**arity):
            tok, vl, vc = take(f"table entry for {op}")
            if not re.fullmatch(r"\d+", tok):
                raise AlgebraParseError(f"expected table entry for {op}, got {tok!r}", vl, vc)
            v = int(tok)
            if v >= n:
                raise AlgebraParseError(f"table entry {v} outside carrier of size {n}", vl, vc)
            vals.append(v)
        ops.append((op, arity))
        tables[op] = vals
    return FiniteAlgebra(Signature(tuple(ops)), n, tables, name=name)


def format_algebra(a: FiniteAlgebra) -> str:
    lines = [f"algebra {a.name}", f"carrier {a.size}"]
    for op, arity in a.signature:
        lines.append(f"op {op}/{arity}")
        flat = a.tables[op].ravel()
        if arity <= 1:
            lines.append(" ".join(str(int(v)) for v in flat))
        else:
            for row in flat.reshape(-1, a.size):
                lines.append(" ".join(str(int(v)) for v in row))
    return "\n".join(lines) + "\n"


def load_algebra(path) -> FiniteAlgebra:
    with open(path, encoding="utf-8") as fh:
        return parse_algebra(fh.read())


def all_tuples(n: int, k: int) -> Iterator[tuple[int, ...]]:
    return itertools.product(range(n), repeat=k)
