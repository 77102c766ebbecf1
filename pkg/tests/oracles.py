"""Brute-force reference implementations, deliberately naive and numpy-free.

Nothing here calls into the closure or congruence code under test; algebras
are read only through their operation tables.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from math import gcd


def table(a, op):
    t = a.tables[op]
    ar = a.arity(op)
    return {args: int(t[args]) for args in itertools.product(range(a.size), repeat=ar)}


def ops(a):
    return [(op, a.arity(op), table(a, op)) for op in a.signature.names]


@lru_cache(maxsize=None)
def set_partitions(n):
    """All partitions of range(n) as tuples of block labels (least element)."""
    out = []

    def rec(i, labels):
        if i == n:
            out.append(tuple(labels))
            return
        for lab in sorted(set(labels)):
            rec(i + 1, labels + [lab])
        rec(i + 1, labels + [i])

    rec(0, [])
    return tuple(out)


def related(labels, x, y):
    return labels[x] == labels[y]


def compatible(a, labels):
    for _, ar, t in ops(a):
        for xs in itertools.product(range(a.size), repeat=ar):
            for ys in itertools.product(range(a.size), repeat=ar):
                if all(related(labels, x, y) for x, y in zip(xs, ys)):
                    if not related(labels, t[xs], t[ys]):
                        return False
    return True


def brute_congruences(a):
    return [p for p in set_partitions(a.size) if compatible(a, p)]


def refines(p, q):
    return all(q[i] == q[p[i]] for i in range(len(p)))


def least(parts):
    """The unique minimum under refinement, asserting it exists."""
    for p in parts:
        if all(refines(p, q) for q in parts):
            return p
    raise AssertionError("no least element")


def brute_cg(a, pairs, cons=None):
    cons = brute_congruences(a) if cons is None else cons
    return least([p for p in cons if all(related(p, x, y) for x, y in pairs)])


def naive_closure(a, gens, k):
    """Subuniverse of A^k generated by gens: apply every op to every tuple of elements until stable."""
    elems = set(tuple(g) for g in gens)
    for _, ar, t in ops(a):
        if ar == 0:
            elems.add((t[()],) * k)
    while True:
        new = set()
        cur = list(elems)
        for _, ar, t in ops(a):
            if ar == 0:
                continue
            for args in itertools.product(cur, repeat=ar):
                r = tuple(t[tuple(arg[i] for arg in args)] for i in range(k))
                if r not in elems:
                    new.add(r)
        if not new:
            return elems
        elems |= new


def naive_matrices(a, alpha, beta):
    n = a.size
    gens = [(x, x, y, y) for x in range(n) for y in range(n) if related(alpha, x, y)]
    gens += [(x, y, x, y) for x in range(n) for y in range(n) if related(beta, x, y)]
    return naive_closure(a, gens, 4)


def brute_centralizes(mats, delta):
    return all(related(delta, u21, u22) for u11, u12, u21, u22 in mats if related(delta, u11, u12))


def brute_commutator(a, alpha, beta, cons=None):
    cons = brute_congruences(a) if cons is None else cons
    mats = naive_matrices(a, alpha, beta)
    return least([d for d in cons if brute_centralizes(mats, d)])


def binary_term_ops(a):
    """All binary term operations, as dicts (x, y) -> value, by naive closure."""
    n = a.size
    pts = list(itertools.product(range(n), repeat=2))
    proj = [tuple(p[0] for p in pts), tuple(p[1] for p in pts)]
    clone = set(proj)
    for _, ar, t in ops(a):
        if ar == 0:
            clone.add(tuple(t[()] for _ in pts))
    while True:
        new = set()
        cur = list(clone)
        for _, ar, t in ops(a):
            if ar == 0:
                continue
            for args in itertools.product(cur, repeat=ar):
                r = tuple(t[tuple(f[i] for f in args)] for i in range(len(pts)))
                if r not in clone:
                    new.add(r)
        if not new:
            return [dict(zip(pts, f)) for f in clone]
        clone |= new


def m11_matrices(a, alpha, beta):
    """Union of M_{1,1,t}: matrices (t(a,b) t(a,b'); t(a',b) t(a',b')) over binary terms t."""
    n = a.size
    out = set()
    for t in binary_term_ops(a):
        for x, x2 in itertools.product(range(n), repeat=2):
            if not related(alpha, x, x2):
                continue
            for y, y2 in itertools.product(range(n), repeat=2):
                if related(beta, y, y2):
                    out.add((t[x, y], t[x, y2], t[x2, y], t[x2, y2]))
    return out


# --- groups -------------------------------------------------------------------


def group_parts(a):
    mul, inv, e = table(a, "mul"), table(a, "inv"), table(a, "e")[()]
    return mul, inv, e


def subgroup_generated(a, gens):
    mul, inv, e = group_parts(a)
    s = {e} | set(gens)
    while True:
        new = {mul[x, y] for x in s for y in s} | {inv[(x,)] for x in s}
        if new <= s:
            return frozenset(s)
        s |= new


def normal_subgroup_of(a, labels):
    _, _, e = group_parts(a)
    return frozenset(x for x in range(a.size) if labels[x] == labels[e])


def congruence_of_subgroup(a, n_sub):
    mul, inv, _ = group_parts(a)
    labels = []
    for x in range(a.size):
        coset = [y for y in range(a.size) if mul[inv[(x,)], y] in n_sub]
        labels.append(min(coset))
    return tuple(labels)


def group_commutator_subgroup(a, m, k):
    mul, inv, _ = group_parts(a)
    comms = {mul[mul[mul[x, y], inv[(x,)]], inv[(y,)]] for x in m for y in k}
    return subgroup_generated(a, comms)


# --- rings Z_n ------------------------------------------------------------------------


def ideal_congruence(n, d):
    """Congruence of the ideal (d) in Z_n, d | n."""
    return tuple(x % d for x in range(n))


def ideal_of_congruence(n, labels):
    members = [x for x in range(n) if labels[x] == labels[0]]
    d = n
    for x in members:
        d = gcd(d, x)
    return d


def ideal_product(n, d1, d2):
    return gcd(d1 * d2, n)
