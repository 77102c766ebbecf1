import itertools

import numpy as np
import pytest

from uacomm.algebra import CapExceeded, Homomorphism
from uacomm.catalog import acceptance_catalog, bare_set, chain_lattice, cyclic_group, klein_group, zn_ring
from uacomm.congruence import (cg, con_all, is_compatible_uniformity, is_congruence, join, kernel,
                               lattice_law_check, meet, permute, pushforward, quotient, ug, ug_saturate)
from uacomm.partition import Partition, parse_partition
from uacomm.relations import BitRelation, RelationFilter, check_axioms, equivalence_closure

from oracles import brute_cg, brute_congruences, least, refines

CATALOG = acceptance_catalog()
SMALL = ["Z2", "Z3", "Z4", "Z6", "Z2ring", "Z4ring", "Z6ring", "S3", "C2", "B2"]


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_con_all_matches_brute_force(name):
    a = CATALOG[name]
    got = {p.labels for p in con_all(a)}
    assert got == set(brute_congruences(a))


@pytest.mark.parametrize("name", SMALL)
def test_cg_matches_brute_force(name):
    a = CATALOG[name]
    cons = brute_congruences(a)
    rng = np.random.default_rng(7)
    for _ in range(25):
        pairs = [tuple(int(v) for v in rng.integers(0, a.size, 2)) for _ in range(rng.integers(0, 3))]
        assert cg(a, pairs).labels == brute_cg(a, pairs, cons)


def test_cg_examples():
    z4 = cyclic_group(4)
    assert str(cg(z4, [(0, 2)])) == "0 2|1 3"
    assert cg(z4, [(0, 1)]).is_top()
    assert cg(z4, []).is_bottom()
    assert str(cg(zn_ring(6), [(0, 3)])) == "0 3|1 4|2 5"
    assert str(cg(chain_lattice(3), [(0, 1)])) == "0 1|2"


def test_cg_accepts_relations_and_partitions():
    z6 = cyclic_group(6)
    rel = BitRelation.from_pairs(6, [(0, 2)])
    assert cg(z6, rel) == cg(z6, [(0, 2)]) == cg(z6, Partition([0, 1, 0, 3, 4, 5]))


@pytest.mark.parametrize("name", SMALL)
def test_cg_is_closure_operator(name):
    a = CATALOG[name]
    lat = con_all(a)
    rng = np.random.default_rng(19)
    for _ in range(20):
        bits = rng.random((a.size, a.size)) < 0.1
        r = BitRelation(bits)
        c = cg(a, r)
        assert is_congruence(a, c)
        assert r <= c.relation()
        assert cg(a, c) == c
        # extensive and least among congruences containing r
        assert c == Partition(least([p.labels for p in lat if r <= p.relation()]))


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_lattice_closed_under_meet_and_join(name):
    a = CATALOG[name]
    lat = con_all(a)
    assert lat.bottom.is_bottom() and lat.top.is_top()
    for p, q in itertools.product(lat, repeat=2):
        assert meet(p, q) in lat and join(a, p, q) in lat
        assert lat.leq[lat.index(p), lat.index(q)] == refines(p.labels, q.labels)


def test_con_all_cap():
    with pytest.raises(CapExceeded):
        con_all(cyclic_group(8), cap=4)


def test_lattice_law_examples():
    assert lattice_law_check(con_all(klein_group())).modular
    assert not lattice_law_check(con_all(klein_group())).distributive
    assert lattice_law_check(con_all(cyclic_group(8))).distributive
    assert lattice_law_check(con_all(chain_lattice(3))).distributive
    # the 3-element set without operations has Con = Pi_3, modular but not distributive
    laws = lattice_law_check(con_all(bare_set(3)))
    assert laws.modular and not laws.distributive
    # Pi_4 is not modular
    assert not lattice_law_check(con_all(bare_set(4))).modular


@pytest.mark.parametrize("name", ["Z4", "Z6", "S3", "Z6ring", "B2"])
def test_quotient_and_kernel(name):
    a = CATALOG[name]
    for alpha in con_all(a):
        q, f = quotient(a, alpha)
        assert q.size == alpha.num_blocks()
        assert kernel(f) == alpha
        # correspondence: congruences of the quotient pull back to those above alpha
        above = {p for p in con_all(a) if alpha <= p}
        pulled = {f.preimage_partition(t) for t in con_all(q)}
        assert pulled == above


def test_permute():
    z6 = cyclic_group(6)
    lat = con_all(z6)
    assert all(permute(p, q) for p in lat for q in lat)
    p, q = parse_partition("0 1|2", 3), parse_partition("0|1 2", 3)
    assert not permute(p, q)


@pytest.mark.parametrize("name", ["Z3", "Z4", "Z6", "S3", "Z4ring", "C2", "B2"])
def test_ug_two_routes(name):
    a = CATALOG[name]
    rng = np.random.default_rng(23)
    for _ in range(30):
        rho = BitRelation(rng.random((a.size, a.size)) < 0.12)
        u = ug(a, rho)
        assert u == ug_saturate(a, rho)
        assert is_compatible_uniformity(a, u)
        assert u == ug(a, cg(a, rho).relation())


def test_ug_on_filters_uses_core():
    z4 = cyclic_group(4)
    f = RelationFilter([BitRelation.from_pairs(4, [(0, 2), (1, 1)]), BitRelation.from_pairs(4, [(0, 2), (3, 3)])])
    assert ug(z4, f) == RelationFilter.principal(parse_partition("0 2|1 3", 4).relation())


def least_pushforward_oracle(f, alpha):
    """Least congruence theta of the target with alpha inside f^-1(theta), by enumeration."""
    b = f.target
    cands = [t for t in brute_congruences(b)
             if all(t[f(x)] == t[f(y)] for x, y in alpha.pairs())]
    return least(cands)


def quotient_maps():
    for name, a in CATALOG.items():
        if a.size > 6:
            continue
        for alpha in con_all(a):
            _, f = quotient(a, alpha)
            yield name, f
    z8, z4, z2 = cyclic_group(8), cyclic_group(4), cyclic_group(2)
    yield "Z8->Z4", Homomorphism(z8, z4, [x % 4 for x in range(8)])
    yield "Z8->Z2", Homomorphism(z8, z2, [x % 2 for x in range(8)])
    yield "Z4ring->Z2ring", Homomorphism(zn_ring(4), zn_ring(2), [x % 2 for x in range(4)])
    yield "Z6ring->Z2ring", Homomorphism(zn_ring(6), zn_ring(2), [x % 2 for x in range(6)])


@pytest.mark.parametrize("label,f", list(quotient_maps()))
def test_pushforward_principal(label, f):
    a = f.source
    for alpha in con_all(a):
        u = RelationFilter.principal(alpha.relation())
        v = pushforward(f, u)
        theta = Partition(least_pushforward_oracle(f, alpha))
        assert v == RelationFilter.principal(theta.relation())
        assert check_axioms(v).uniformity


def test_pushforward_examples():
    z4, z2 = cyclic_group(4), cyclic_group(2)
    f = Homomorphism(z4, z2, [0, 1, 0, 1])
    full = RelationFilter.principal(BitRelation.full(4))
    assert pushforward(f, full).core == BitRelation.full(2)
    mod2 = RelationFilter.principal(parse_partition("0 2|1 3", 4).relation())
    assert pushforward(f, mod2).core == BitRelation.diagonal(2)
    bad = RelationFilter.principal(parse_partition("0 1|2 3", 4).relation())
    with pytest.raises(ValueError):
        pushforward(f, bad)


def test_pushforward_non_principal_base():
    z8 = cyclic_group(8)
    f = Homomorphism(z8, cyclic_group(4), [x % 4 for x in range(8)])
    base = [parse_partition("0 2 4 6|1 3 5 7", 8).relation(), parse_partition("0 4|1 5|2 6|3 7", 8).relation()]
    v = pushforward(f, RelationFilter(base))
    # the core (mod 4) maps onto the diagonal; the coarser member survives in the base
    assert v.core == BitRelation.diagonal(4)
    assert parse_partition("0 2|1 3", 4).relation() in v.base


def test_pushforward_non_compatible_variant():
    s = bare_set(4)
    f = Homomorphism(s, bare_set(2), [0, 0, 1, 1])
    u = RelationFilter.principal(parse_partition("0 2|1|3", 4).relation())
    v = pushforward(f, u, compatible=False)
    assert v.core == BitRelation.full(2)
    assert v.core == equivalence_closure(f.image_relation(u.core))
