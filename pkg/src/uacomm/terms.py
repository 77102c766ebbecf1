"""Clone generation and Mal'tsev, Day and Jonsson term witnesses."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional, Sequence

import numpy as np

from .algebra import (POWER_CAP, App, CapExceeded, FiniteAlgebra, Term, Var, parse_term, substitute,
                      term_table)

CLONE_BUDGET = 10**6


class CloneBudgetExceeded(RuntimeError):
    """The clone grew past its budget before the search could decide."""


class WitnessError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class CloneElement:
    arity: int
    size: int
    table: np.ndarray = field(repr=False)
    witness: Term

    def __str__(self) -> str:
        return str(self.witness)

    def __call__(self, *args) -> np.ndarray:
        """Evaluate at (arrays of) arguments, vectorized."""
        n = self.size
        idx = np.zeros(np.broadcast(*args).shape if args else (), dtype=np.int64)
        for x in args:
            idx = idx * n + np.asarray(x, dtype=np.int64)
        return self.table[idx]


@dataclass
class TermWitness:
    kind: str
    chain: list[CloneElement]
    verified: dict[str, bool]

    @property
    def ok(self) -> bool:
        return all(self.verified.values())

    def terms(self) -> list[str]:
        return [str(c.witness) for c in self.chain]


def _grid(n: int, k: int) -> list[np.ndarray]:
    return [g.ravel() for g in np.indices((n,) * k)] if k else []


def element_from_term(a: FiniteAlgebra, t: Term, k: int) -> CloneElement:
    table = np.ascontiguousarray(term_table(a, t, k), dtype=np.int64)
    return CloneElement(k, a.size, table, t)


# --- clone closure ------------------------------------------------------------


def clone_levels(a: FiniteAlgebra, k: int, budget: int = CLONE_BUDGET) -> Iterator[list[CloneElement]]:
    """Breadth-first closure of the k projections, one list of new elements per depth.

    Every element first appears at the least depth at which some term
    produces it, and carries that term as its witness.
    """
    n = a.size
    if n**k > POWER_CAP:
        raise CapExceeded(f"clone tables of length {n**k} exceed cap {POWER_CAP}")
    grid = _grid(n, k)
    seen: dict[bytes, int] = {}
    elems: list[CloneElement] = []
    rows: list[np.ndarray] = []

    def add(table: np.ndarray, term: Term, out: list) -> None:
        key = table.tobytes()
        if key in seen:
            return
        seen[key] = len(elems)
        el = CloneElement(k, n, table, term)
        elems.append(el)
        rows.append(table)
        out.append(el)
        if len(elems) > budget:
            raise CloneBudgetExceeded(f"clone of arity {k} exceeds {budget} tables")

    level: list[CloneElement] = []
    for i in range(k):
        add(np.ascontiguousarray(grid[i], dtype=np.int64), Var(i), level)
    for op, arity in a.signature:
        if arity == 0:
            add(np.full(n**k, a.tables[op][()], dtype=np.int64), App(op), level)
    yield level
    ops = [(op, a.tables[op], arity) for op, arity in a.signature if arity > 0]
    lo = 0
    while level:
        hi = len(elems)
        mat = np.stack(rows)
        nxt: list[CloneElement] = []
        for op, table, arity in ops:
            for p in range(arity):
                ranges = [range(0, lo)] * p + [range(lo, hi)] + [range(0, hi)] * (arity - p - 1)
                last = np.arange(ranges[-1].start, ranges[-1].stop)
                if not len(last):
                    continue
                for head in itertools.product(*ranges[:-1]):
                    args = tuple(mat[i][None, :] for i in head) + (mat[last],)
                    res = table[args]
                    for j, r in zip(last.tolist(), res):
                        key = r.tobytes()
                        if key not in seen:
                            term = App(op, tuple(elems[i].witness for i in head) + (elems[j].witness,))
                            add(np.ascontiguousarray(r), term, nxt)
        lo = hi
        level = nxt
        if level:
            yield level


def clone_generate(a: FiniteAlgebra, k: int, budget: int = CLONE_BUDGET) -> list[CloneElement]:
    out: list[CloneElement] = []
    for level in clone_levels(a, k, budget):
        out.extend(level)
    return out


def _search(a: FiniteAlgebra, k: int, accept: Callable[[np.ndarray], bool],
            budget: int) -> Optional[CloneElement]:
    for level in clone_levels(a, k, budget):
        for el in level:
            if accept(el.table):
                return el
    return None


# --- identities ---------------------------------------------------------------


def _maltsev_checks(a: FiniteAlgebra, p: CloneElement) -> dict[str, bool]:
    x, y = _grid(a.size, 2)
    return {"p(x,x,y)=y": bool(np.all(p(x, x, y) == y)),
            "p(x,y,y)=x": bool(np.all(p(x, y, y) == x))}


def _maltsev_predicate(n: int) -> Callable[[np.ndarray], bool]:
    x, y = _grid(n, 2)
    i_xxy = (x * n + x) * n + y
    i_xyy = (x * n + y) * n + y
    return lambda t: bool(np.array_equal(t[i_xxy], y) and np.array_equal(t[i_xyy], x))


def verify_day(a: FiniteAlgebra, chain: Sequence[CloneElement]) -> dict[str, bool]:
    """Check (D1)-(D5) for the chain on every 4-tuple of the carrier."""
    if not chain or any(c.arity != 4 for c in chain):
        raise WitnessError("Day terms are a nonempty chain of quaternary operations")
    n = a.size
    x, y, z, w = _grid(n, 4)
    k = len(chain) - 1
    d1 = all(np.array_equal(m(x, y, y, x), x) for m in chain)
    d2 = bool(np.array_equal(chain[0](x, y, z, w), x))
    d3 = bool(np.array_equal(chain[k](x, y, z, w), w))
    d4 = all(np.array_equal(chain[i](x, x, y, y), chain[i + 1](x, x, y, y)) for i in range(0, k, 2))
    d5 = all(np.array_equal(chain[i](x, y, y, z), chain[i + 1](x, y, y, z)) for i in range(1, k, 2))
    return {"D1": bool(d1), "D2": d2, "D3": d3, "D4": bool(d4), "D5": bool(d5)}


def verify_jonsson(a: FiniteAlgebra, chain: Sequence[CloneElement]) -> dict[str, bool]:
    """Check (J1)-(J5) for the chain on every 3-tuple of the carrier."""
    if not chain or any(c.arity != 3 for c in chain):
        raise WitnessError("Jonsson terms are a nonempty chain of ternary operations")
    x, y, z = _grid(a.size, 3)
    k = len(chain) - 1
    j3 = all(np.array_equal(d(x, y, x), x) for d in chain)
    j4 = all(np.array_equal(chain[i](x, x, y), chain[i + 1](x, x, y)) for i in range(0, k, 2))
    j5 = all(np.array_equal(chain[i](x, y, y), chain[i + 1](x, y, y)) for i in range(1, k, 2))
    return {"J1": bool(np.array_equal(chain[0](x, y, z), x)),
            "J2": bool(np.array_equal(chain[k](x, y, z), z)),
            "J3": bool(j3), "J4": bool(j4), "J5": bool(j5)}


# --- Mal'tsev -------------------------------------------------------------------


def find_maltsev(a: FiniteAlgebra, budget: int = CLONE_BUDGET) -> Optional[TermWitness]:
    """Least-depth ternary term p with p(x,x,y)=y and p(x,y,y)=x, or None if the clone has none.

    Raises CloneBudgetExceeded when the clone outgrows the budget first.
    """
    p = _search(a, 3, _maltsev_predicate(a.size), budget)
    if p is None:
        return None
    return TermWitness("maltsev", [p], _maltsev_checks(a, p))


def classical_maltsev(a: FiniteAlgebra) -> Optional[TermWitness]:
    """x y^-1 z for group-like signatures, x - y + z for ring-like ones, if it verifies."""
    names = set(a.signature.names)
    candidates = []
    if {"mul", "inv"} <= names and a.arity("mul") == 2 and a.arity("inv") == 1:
        candidates.append("(mul (mul x0 (inv x1)) x2)")
    if {"add", "neg"} <= names and a.arity("add") == 2 and a.arity("neg") == 1:
        candidates.append("(add (add x0 (neg x1)) x2)")
    for text in candidates:
        p = element_from_term(a, parse_term(text, a.signature), 3)
        checks = _maltsev_checks(a, p)
        if all(checks.values()):
            return TermWitness("maltsev", [p], checks)
    return None


def day_from_maltsev(a: FiniteAlgebra, p: CloneElement) -> TermWitness:
    """Day chain x, p(x, p(x,y,z), w), w built from a Mal'tsev operation."""
    if not all(_maltsev_checks(a, p).values()):
        raise WitnessError("not a Mal'tsev operation on this algebra")
    px = p.witness
    m1 = substitute(px, (Var(0), substitute(px, (Var(0), Var(1), Var(2))), Var(3)))
    n = a.size
    x, y, z, w = _grid(n, 4)
    inner = p(x, y, z)
    chain = [
        CloneElement(4, n, np.ascontiguousarray(x), Var(0)),
        CloneElement(4, n, np.ascontiguousarray(p(x, inner, w)), m1),
        CloneElement(4, n, np.ascontiguousarray(w), Var(3)),
    ]
    checks = verify_day(a, chain)
    if not all(checks.values()):
        raise WitnessError(f"Day identities failed: {checks}")
    return TermWitness("day", chain, checks)


# --- chain searches ---------------------------------------------------------------


def _chain_search(a: FiniteAlgebra, k: int, node_ok, even_key, odd_key, start: int, goal: int,
                  max_len: int, budget: int) -> Optional[list[CloneElement]]:
    """Shortest chain from projection ``start`` to projection ``goal``.

    Nodes are clone tables passing ``node_ok``; a step from index i to i+1
    needs equal ``even_key`` (i even) or ``odd_key`` (i odd) restrictions.
    The whole clone is generated first so the chain is globally shortest.
    If the budget runs out, a chain among the tables seen so far is still a
    valid witness; only when there is none is the search inconclusive.
    """
    nodes: list[CloneElement] = []
    by_key: list[dict[bytes, list[int]]] = [{}, {}]
    ends = {}
    exhausted = None
    try:
        for level in clone_levels(a, k, budget):
            for el in level:
                if not node_ok(el.table):
                    continue
                idx = len(nodes)
                nodes.append(el)
                by_key[0].setdefault(even_key(el.table).tobytes(), []).append(idx)
                by_key[1].setdefault(odd_key(el.table).tobytes(), []).append(idx)
                if isinstance(el.witness, Var):
                    ends[el.witness.index] = idx
    except CloneBudgetExceeded as exc:
        exhausted = exc
    path = None
    if start in ends and goal in ends:
        path = _bfs(nodes, by_key, even_key, odd_key, ends[start], ends[goal], max_len)
    if path is None and exhausted is not None:
        raise exhausted
    return None if path is None else [nodes[i] for i in path]


def _bfs(nodes, by_key, even_key, odd_key, s: int, g: int, max_len: int) -> Optional[list[int]]:
    # state = (node, parity of its index in the chain)
    prev = {(s, 0): None}
    queue = deque([(s, 0, 0)])
    while queue:
        u, par, depth = queue.popleft()
        if u == g:
            path = []
            state = (u, par)
            while state is not None:
                path.append(state[0])
                state = prev[state]
            return path[::-1]
        if depth >= max_len:
            continue
        keyf = even_key if par == 0 else odd_key
        for v in by_key[par].get(keyf(nodes[u].table).tobytes(), []):
            nxt = (v, 1 - par)
            if nxt not in prev:
                prev[nxt] = (u, par)
                queue.append((v, 1 - par, depth + 1))
    return None


def find_day(a: FiniteAlgebra, max_len: int = 6, budget: int = CLONE_BUDGET) -> Optional[TermWitness]:
    """Shortest Day chain of length at most ``max_len`` in the quaternary clone, or None."""
    n = a.size
    x, y, z, w = _grid(n, 4)
    x2, y2 = _grid(n, 2)
    enc = lambda *c: ((c[0] * n + c[1]) * n + c[2]) * n + c[3]  # noqa: E731
    i_d1 = enc(x, y, y, x)
    i_even = enc(x2, x2, y2, y2)
    x3, y3, z3 = _grid(n, 3)
    i_odd = enc(x3, y3, y3, z3)
    chain = _chain_search(
        a, 4,
        node_ok=lambda t: bool(np.array_equal(t[i_d1], x)),
        even_key=lambda t: t[i_even], odd_key=lambda t: t[i_odd],
        start=0, goal=3, max_len=max_len, budget=budget)
    if chain is None:
        return None
    return TermWitness("day", chain, verify_day(a, chain))


def find_jonsson(a: FiniteAlgebra, max_len: int = 6, budget: int = CLONE_BUDGET) -> Optional[TermWitness]:
    """Shortest Jonsson chain of length at most ``max_len`` in the ternary clone, or None."""
    n = a.size
    x, y, z = _grid(n, 3)
    x2, y2 = _grid(n, 2)
    enc = lambda *c: (c[0] * n + c[1]) * n + c[2]  # noqa: E731
    i_j3 = enc(x, y, x)
    i_even = enc(x2, x2, y2)
    i_odd = enc(x2, y2, y2)
    chain = _chain_search(
        a, 3,
        node_ok=lambda t: bool(np.array_equal(t[i_j3], x)),
        even_key=lambda t: t[i_even], odd_key=lambda t: t[i_odd],
        start=0, goal=2, max_len=max_len, budget=budget)
    if chain is None:
        return None
    return TermWitness("jonsson", chain, verify_jonsson(a, chain))


# --- witnesses from user terms ------------------------------------------------------


def day_witness_from_terms(a: FiniteAlgebra, terms: Sequence) -> TermWitness:
    """Day chain from term literals or trees; raises WitnessError unless (D1)-(D5) hold."""
    chain = []
    for t in terms:
        if isinstance(t, str):
            t = parse_term(t, a.signature)
        if t.max_var() > 3:
            raise WitnessError(f"Day term {t} uses a variable beyond x3")
        chain.append(element_from_term(a, t, 4))
    checks = verify_day(a, chain)
    if not all(checks.values()):
        raise WitnessError(f"Day identities failed: {checks}")
    return TermWitness("day", chain, checks)


def parse_term_chain(text: str) -> list[str]:
    """One term per non-blank line; ``#`` starts a comment."""
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def auto_day_witness(a: FiniteAlgebra, max_len: int = 6, budget: int = CLONE_BUDGET) -> Optional[TermWitness]:
    """Day terms for the algebra: classical Mal'tsev route, then clone search.

    The clone route tries a Mal'tsev term first and falls back to a direct
    Day chain search. Raises CloneBudgetExceeded if every route is inconclusive.
    """
    p = classical_maltsev(a)
    if p is not None:
        return day_from_maltsev(a, p.chain[0])
    try:
        p = find_maltsev(a, budget)
    except CloneBudgetExceeded:
        p = None
    if p is not None:
        return day_from_maltsev(a, p.chain[0])
    return find_day(a, max_len, budget)
