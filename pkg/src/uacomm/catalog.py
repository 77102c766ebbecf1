"""Small algebras used throughout the tests and demos."""

from __future__ import annotations

import itertools

import numpy as np

from .algebra import FiniteAlgebra, Signature

GROUP_SIGNATURE = Signature((("mul", 2), ("inv", 1), ("e", 0)))
RING_SIGNATURE = Signature((("add", 2), ("neg", 1), ("zero", 0), ("mul", 2), ("one", 0)))
LATTICE_SIGNATURE = Signature((("meet", 2), ("join", 2)))


def cyclic_group(n: int) -> FiniteAlgebra:
    x = np.arange(n)
    return FiniteAlgebra(GROUP_SIGNATURE, n, {
        "mul": (x[:, None] + x[None, :]) % n,
        "inv": (-x) % n,
        "e": 0,
    }, name=f"Z{n}")


def zn_ring(n: int) -> FiniteAlgebra:
    x = np.arange(n)
    return FiniteAlgebra(RING_SIGNATURE, n, {
        "add": (x[:, None] + x[None, :]) % n,
        "neg": (-x) % n,
        "zero": 0,
        "mul": (x[:, None] * x[None, :]) % n,
        "one": 1 % n,
    }, name=f"Z{n}ring")


def permutation_group(perms, name: str) -> FiniteAlgebra:
    """Group algebra on a list of permutations (tuples), composed as (p*q)(i) = p(q(i))."""
    perms = sorted(tuple(p) for p in perms)
    index = {p: i for i, p in enumerate(perms)}
    n = len(perms)
    ident = tuple(range(len(perms[0])))
    mul = np.zeros((n, n), dtype=np.int64)
    inv = np.zeros(n, dtype=np.int64)
    for i, p in enumerate(perms):
        for j, q in enumerate(perms):
            mul[i, j] = index[tuple(p[q[k]] for k in range(len(q)))]
        pinv = [0] * len(p)
        for k, v in enumerate(p):
            pinv[v] = k
        inv[i] = index[tuple(pinv)]
    return FiniteAlgebra(GROUP_SIGNATURE, n, {"mul": mul, "inv": inv, "e": index[ident]}, name=name)


def generate_permutations(gens) -> list[tuple[int, ...]]:
    gens = [tuple(g) for g in gens]
    ident = tuple(range(len(gens[0])))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple(g[p[k]] for k in range(len(p)))
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return sorted(seen)


def symmetric_group(k: int = 3) -> FiniteAlgebra:
    return permutation_group(itertools.permutations(range(k)), name=f"S{k}")


def dihedral_group(k: int = 4) -> FiniteAlgebra:
    """Symmetries of the regular k-gon, order 2k."""
    rot = tuple((i + 1) % k for i in range(k))
    ref = tuple((-i) % k for i in range(k))
    return permutation_group(generate_permutations([rot, ref]), name=f"D{k}")


def klein_group() -> FiniteAlgebra:
    """Z2 x Z2 with elements 0=(0,0), 1=(0,1), 2=(1,0), 3=(1,1)."""
    x = np.arange(4)
    return FiniteAlgebra(GROUP_SIGNATURE, 4, {"mul": x[:, None] ^ x[None, :], "inv": x, "e": 0}, name="V4")


def chain_lattice(n: int = 2) -> FiniteAlgebra:
    x = np.arange(n)
    return FiniteAlgebra(LATTICE_SIGNATURE, n, {
        "meet": np.minimum(x[:, None], x[None, :]),
        "join": np.maximum(x[:, None], x[None, :]),
    }, name=f"C{n}")


def boolean_lattice(k: int = 2) -> FiniteAlgebra:
    """Subsets of a k-set as bitmasks, ordered by inclusion."""
    n = 1 << k
    x = np.arange(n)
    return FiniteAlgebra(LATTICE_SIGNATURE, n, {
        "meet": x[:, None] & x[None, :],
        "join": x[:, None] | x[None, :],
    }, name=f"B{k}")


def bare_set(n: int) -> FiniteAlgebra:
    return FiniteAlgebra(Signature(()), n, {}, name=f"Set{n}")


def acceptance_catalog() -> dict[str, FiniteAlgebra]:
    return {
        "Z2": cyclic_group(2),
        "Z3": cyclic_group(3),
        "Z4": cyclic_group(4),
        "Z6": cyclic_group(6),
        "Z8": cyclic_group(8),
        "Z2ring": zn_ring(2),
        "Z4ring": zn_ring(4),
        "Z6ring": zn_ring(6),
        "S3": symmetric_group(3),
        "C2": chain_lattice(2),
        "B2": boolean_lattice(2),
    }


def is_group_signature(a: FiniteAlgebra) -> bool:
    return a.signature == GROUP_SIGNATURE
