"""Acceptance suite: one test per criterion, tagged for the summary printed at the end of the run.

Tolerances are exact (set and partition equality) except for the pinned
wall-clock limits below.
"""

import itertools
import random
import time

import numpy as np
import pytest

from uacomm.algebra import FiniteAlgebra, Homomorphism
from uacomm.catalog import (LATTICE_SIGNATURE, acceptance_catalog, bare_set, boolean_lattice, chain_lattice,
                            cyclic_group, dihedral_group, klein_group, zn_ring)
from uacomm.commutator import (c_commutator, commutator_via_delta, commutator_via_xm, property_suite,
                               weak_c_commutator)
from uacomm.congruence import cg, con_all, pushforward, quotient, ug
from uacomm.group_topology import FiniteGroup, NeighborhoodBase, equivalence_theorem_check
from uacomm.partition import Partition
from uacomm.relations import BitRelation, RelationFilter, semipermute_join_check
from uacomm.terms import auto_day_witness, day_from_maltsev, find_day, find_jonsson, find_maltsev
from uacomm.unif import INF, CongruenceFilter, ZIdealFilter, cucommu_inequality_check, z_commutator

from oracles import (brute_congruences, congruence_of_subgroup, group_commutator_subgroup, ideal_congruence,
                     ideal_product, least, set_partitions, subgroup_generated)

ROUTE_AGREEMENT_SECONDS = 120.0
Z_FILTER_SECONDS = 1.0
TERM_MACHINERY_SECONDS = 30.0

CATALOG = acceptance_catalog()
GROUPS = ["Z2", "Z3", "Z4", "Z6", "Z8", "S3"]


def lattice_from_order(n, leq):
    """Lattice algebra on range(n) from a partial order given as a predicate."""
    def bound(x, y, upper):
        cands = [z for z in range(n) if (leq(x, z) and leq(y, z) if upper else leq(z, x) and leq(z, y))]
        best = [z for z in cands if all((leq(z, w) if upper else leq(w, z)) for w in cands)]
        assert len(best) == 1
        return best[0]
    meet = [[bound(x, y, False) for y in range(n)] for x in range(n)]
    join = [[bound(x, y, True) for y in range(n)] for x in range(n)]
    return FiniteAlgebra(LATTICE_SIGNATURE, n, {"meet": meet, "join": join})


def m3():
    return lattice_from_order(5, lambda x, y: x == y or x == 0 or y == 4)


def n5():
    up = {(0, 1), (1, 2), (0, 2), (0, 3)} | {(x, 4) for x in range(4)}
    return lattice_from_order(5, lambda x, y: x == y or (x, y) in up)


def normal_subgroups(a):
    mul, inv = a.tables["mul"], a.tables["inv"]
    subs = {subgroup_generated(a, [x, y]) for x in range(a.size) for y in range(a.size)}
    return [h for h in subs
            if all(int(mul[mul[inv[g], x], g]) in h for g in range(a.size) for x in h)]


@pytest.mark.criterion(1, "route agreement over the catalog (tc = weak = xm = delta)")
def test_criterion_01_route_agreement():
    start = time.perf_counter()
    checked = 0
    for name, a in CATALOG.items():
        w = auto_day_witness(a)
        assert w is not None and w.ok, name
        lat = con_all(a)
        for alpha, beta in itertools.product(lat, lat):
            tc = c_commutator(a, alpha, beta)
            assert weak_c_commutator(a, alpha, beta) == tc, (name, alpha, beta)
            assert commutator_via_xm(a, w, alpha, beta) == tc, (name, alpha, beta)
            assert commutator_via_delta(a, alpha, beta) == tc, (name, alpha, beta)
            checked += 1
    elapsed = time.perf_counter() - start
    assert checked == sum(len(con_all(a)) ** 2 for a in CATALOG.values())
    assert elapsed < ROUTE_AGREEMENT_SECONDS


@pytest.mark.criterion(2, "group oracle: commutator congruence = commutator subgroup")
def test_criterion_02_group_oracle():
    for name in GROUPS + ["D4"]:
        a = CATALOG[name] if name in CATALOG else dihedral_group()
        normals = normal_subgroups(a)
        assert len(normals) == len(con_all(a))
        for m, k in itertools.product(normals, normals):
            alpha = Partition(congruence_of_subgroup(a, m))
            beta = Partition(congruence_of_subgroup(a, k))
            want = Partition(congruence_of_subgroup(a, group_commutator_subgroup(a, m, k)))
            assert c_commutator(a, alpha, beta) == want, (name, sorted(m), sorted(k))
    s3 = CATALOG["S3"]
    top = Partition.top(6)
    a3 = Partition(congruence_of_subgroup(s3, frozenset({0, 3, 4})))
    assert c_commutator(s3, top, top) == a3
    assert str(a3) == "0 3 4|1 2 5"


@pytest.mark.criterion(3, "ring oracle: commutator = ideal product in Z_n, n <= 8")
def test_criterion_03_ring_oracle():
    for n in range(2, 9):
        r = zn_ring(n)
        divisors = [d for d in range(1, n + 1) if n % d == 0]
        assert len(divisors) == len(con_all(r))
        for d1, d2 in itertools.product(divisors, divisors):
            alpha, beta = Partition(ideal_congruence(n, d1)), Partition(ideal_congruence(n, d2))
            want = Partition(ideal_congruence(n, ideal_product(n, d1, d2)))
            assert c_commutator(r, alpha, beta) == want, (n, d1, d2)
    two = Partition(ideal_congruence(4, 2))
    assert c_commutator(zn_ring(4), two, two).is_bottom()


@pytest.mark.criterion(4, "lattices: [alpha, beta] = alpha meet beta")
def test_criterion_04_distributive_collapse():
    lattices = [chain_lattice(2), chain_lattice(3), chain_lattice(4), boolean_lattice(2), boolean_lattice(3),
                m3(), n5()]
    for a in lattices:
        lat = con_all(a)
        if a.size <= 6:
            assert {p.labels for p in lat} == set(brute_congruences(a))
        for alpha, beta in itertools.product(lat, lat):
            assert c_commutator(a, alpha, beta) == alpha & beta, (a.name, alpha, beta)


@pytest.mark.criterion(5, "Z filter layer: (p^inf)(q^inf) = (pq)^inf and cap additivity")
def test_criterion_05_z_filters():
    start = time.perf_counter()
    primes = [2, 3, 5, 7]
    for p, q in itertools.permutations(primes, 2):
        got = z_commutator(ZIdealFilter.power_filter(p), ZIdealFilter.power_filter(q))
        assert got == ZIdealFilter.power_filter(p * q)
        assert got.canonical() == f"caps{{{min(p, q)}:inf,{max(p, q)}:inf}}"
    rng = random.Random(5)
    values = list(range(10)) + [INF]
    for _ in range(1000):
        c1, c2, c3 = ({p: rng.choice(values) for p in primes} for _ in range(3))
        for p in primes:
            assert min(c1[p], c2[p]) + c3[p] == min(c1[p] + c3[p], c2[p] + c3[p])
    elapsed = time.perf_counter() - start
    assert elapsed < Z_FILTER_SECONDS


@pytest.mark.criterion(6, "term machinery: Mal'tsev, Day, Jonsson, and no Day chain on a bare set")
def test_criterion_06_terms():
    start = time.perf_counter()
    z2 = cyclic_group(2)
    p = find_maltsev(z2)
    assert p is not None and p.ok
    day = day_from_maltsev(z2, p.chain[0])
    assert day.verified == {"D1": True, "D2": True, "D3": True, "D4": True, "D5": True}
    jon = find_jonsson(chain_lattice(2))
    assert jon.ok
    assert jon.terms() == ["x0", "(meet (meet (join x0 x1) (join x0 x2)) (join x1 x2))", "x2"]
    # majority: d1(x,x,y) = d1(x,y,x) = d1(y,x,x) = x
    d1 = jon.chain[1]
    for x, y in itertools.product(range(2), repeat=2):
        assert d1(x, x, y) == d1(x, y, x) == d1(y, x, x) == x
    assert find_day(bare_set(2)) is None
    elapsed = time.perf_counter() - start
    assert elapsed < TERM_MACHINERY_SECONDS


@pytest.mark.criterion(7, "Ug cofinality and the semipermutability biconditional")
def test_criterion_07_uniformities():
    rng = np.random.default_rng(7)
    for name, a in CATALOG.items():
        for _ in range(100):
            density = rng.uniform(0.0, 0.3)
            rho = BitRelation(rng.random((a.size, a.size)) < density)
            assert ug(a, rho) == ug(a, cg(a, rho).relation()), name
    principal = [RelationFilter.principal(Partition(p).relation()) for p in set_partitions(4)]
    assert len(principal) == 15
    for f, g in itertools.product(principal, principal):
        assert semipermute_join_check(f, g)


def quotient_maps():
    for name, a in CATALOG.items():
        for alpha in con_all(a):
            _, f = quotient(a, alpha)
            yield f
    z8, z4, z2 = CATALOG["Z8"], CATALOG["Z4"], CATALOG["Z2"]
    yield Homomorphism(z8, z4, [x % 4 for x in range(8)])
    yield Homomorphism(z8, z2, [x % 2 for x in range(8)])
    yield Homomorphism(z4, z2, [x % 2 for x in range(4)])
    yield Homomorphism(CATALOG["Z6"], z2, [x % 2 for x in range(6)])
    yield Homomorphism(CATALOG["Z6"], CATALOG["Z3"], [x % 3 for x in range(6)])
    yield Homomorphism(CATALOG["S3"], z2, [0, 1, 1, 0, 0, 1])
    yield Homomorphism(CATALOG["Z4ring"], CATALOG["Z2ring"], [x % 2 for x in range(4)])
    yield Homomorphism(CATALOG["Z6ring"], CATALOG["Z2ring"], [x % 2 for x in range(6)])
    yield Homomorphism(CATALOG["B2"], CATALOG["C2"], [0, 1, 0, 1])


@pytest.mark.criterion(8, "pushforward of principal filters along quotient maps")
def test_criterion_08_pushforward():
    count = 0
    for f in quotient_maps():
        b = f.target
        cons_b = brute_congruences(b)
        for alpha in con_all(f.source):
            v = pushforward(f, RelationFilter.principal(alpha.relation()))
            # least compatible v with Fg{alpha} <= f^-1(v): least theta in Con B with f(alpha) inside theta
            theta = least([t for t in cons_b if all(t[f(x)] == t[f(y)] for x, y in alpha.pairs())])
            assert v == RelationFilter.principal(Partition(theta).relation())
            assert v == ug(b, f.image_relation(alpha.relation()))
            count += 1
    assert count > 50


def subgroup_chains(g, max_len=3):
    subs = g.subgroups()
    for k in range(1, max_len + 1):
        for combo in itertools.combinations(subs, k):
            chain = sorted(combo, key=len)
            if all(chain[i] < chain[i + 1] for i in range(k - 1)):
                yield chain


@pytest.mark.criterion(9, "group equivalence theorem on S3 and D4 subgroup bases")
def test_criterion_09_group_equivalence():
    for g in (FiniteGroup(CATALOG["S3"]), FiniteGroup(dihedral_group())):
        seen_true = seen_false = 0
        for chain in subgroup_chains(g):
            rep = equivalence_theorem_check(NeighborhoodBase(g, chain))
            assert rep.consistent, (chain, rep.items)
            normal = g.is_normal(chain[0])
            assert rep.value is normal
            if normal and all(g.is_normal(h) for h in chain):
                assert all(rep.items.values())
            if not normal:
                assert not any(rep.items.values())
            seen_true += rep.value
            seen_false += not rep.value
        assert seen_true and seen_false


@pytest.mark.criterion(10, "commutator property suites and the CUCommU inequality over Z8")
def test_criterion_10_suites():
    homs_into = {}
    for f in quotient_maps():
        homs_into.setdefault(id(f.target), (f.target, []))[1].append(f)
    for name, a in CATALOG.items():
        homs = [Homomorphism.identity(a)] + homs_into.get(id(a), (a, []))[1]
        rep = property_suite(a, auto_day_witness(a), homs)
        assert rep.ok, (name, rep.failures)
        for key in ("symmetry", "below_meet", "monotone", "additive", "preimage"):
            assert rep.counts.get(key, 0) > 0, (name, key)
    for f in quotient_maps():
        if f.target.name and "/" in f.target.name:
            rep = property_suite(f.target, homs=[f])
            assert rep.ok, (f.target.name, rep.failures)
    rng = random.Random(10)
    for a in (cyclic_group(8), zn_ring(8)):
        lat = list(con_all(a))
        for _ in range(200):
            fb = rng.sample(lat, rng.randint(1, len(lat)))
            gb = rng.sample(lat, rng.randint(1, len(lat)))
            rep = cucommu_inequality_check(CongruenceFilter(a, fb), CongruenceFilter(a, gb))
            assert rep.holds


@pytest.mark.criterion(11, "abelian algebras: [top, top] = bottom")
def test_criterion_11_abelian():
    abelian = [CATALOG[n] for n in ["Z2", "Z3", "Z4", "Z6", "Z8"]] + [klein_group(), bare_set(2), bare_set(3)]
    for a in abelian:
        if a.signature.ops:
            mul = a.tables["mul"]
            assert np.array_equal(mul, mul.T)
        top = Partition.top(a.size)
        for route in (c_commutator, weak_c_commutator, commutator_via_delta):
            assert route(a, top, top).is_bottom(), a.name
    # the non-abelian members of the catalog are not abelian in this sense either
    for name in ["S3", "Z2ring", "C2"]:
        a = CATALOG[name]
        assert not c_commutator(a, Partition.top(a.size), Partition.top(a.size)).is_bottom()
