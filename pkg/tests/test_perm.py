import itertools

import pytest

from stablecoh.catalog import CATALOG, group
from stablecoh.perm import (GroupError, GroupHom, OrderCapExceeded, Perm, automorphisms,
                            brute_force_conjugators, cayley_embedding, close_generators,
                            find_conjugator, identity_hom, inclusion, injections, subgroups)


def test_parse_and_print():
    g = Perm.parse("(1 2)(3 4)", 4)
    assert str(g) == "(1 2)(3 4)"
    assert str(Perm.identity(3)) == "()"
    assert g.order() == 2
    with pytest.raises(GroupError):
        Perm.parse("(1 5)", 4)
    with pytest.raises(GroupError):
        Perm.parse("(1 2)(2 3)", 4)


def test_composition_acts_right_to_left():
    s, t = Perm.parse("(1 2)", 3), Perm.parse("(2 3)", 3)
    # (s*t)(x) = s(t(x)): 2 -> 3 under t, 3 fixed by s
    assert (s * t)(1) == 2
    assert str(s * t) == "(1 2 3)"


def test_closure_of_sym3():
    G = close_generators(3, [Perm.parse("(1 2)", 3), Perm.parse("(1 2 3)", 3)])
    assert G.order == 6
    with pytest.raises(OrderCapExceeded):
        close_generators(8, [Perm.parse("(1 2)", 8), Perm.parse("(1 2 3 4 5 6 7 8)", 8)])


@pytest.mark.parametrize("name,count", [("z4", 3), ("klein4", 5), ("q8", 6), ("d8", 10),
                                        ("e2_3", 16), ("z4xz2", 8), ("e2_4", 67)])
def test_subgroup_counts(name, count):
    assert len(subgroups(group(name))) == count


def _brute_subgroups(G):
    # subsets closed under multiplication, for |G| <= 8
    t, out = G.table, set()
    for r in range(1, G.order + 1):
        for S in itertools.combinations(range(G.order), r):
            if 0 in S and all(t[a][b] in S for a in S for b in S):
                out.add(frozenset(S))
    return out


@pytest.mark.parametrize("name", ["klein4", "q8", "d8", "z8"])
def test_subgroups_match_subset_search(name):
    G = group(name)
    found = {frozenset(G.index[g] for g in H.elements) for H in subgroups(G)}
    assert found == _brute_subgroups(G)


def test_injection_counts(klein):
    z2 = group("z2")
    assert len(injections(z2, z2)) == 1
    assert len(automorphisms(klein)) == 6
    a = close_generators(4, [klein.generators[0]])
    assert len(injections(a, klein)) == 3
    assert injections(group("z4"), klein) == []


@pytest.mark.parametrize("name,order", [("q8", 24), ("d8", 8)])
def test_automorphism_group_orders(name, order):
    assert len(automorphisms(group(name))) == order


def test_non_homomorphism_rejected(klein):
    z4 = group("z4")
    # a has order 2 but its proposed image has order 4
    with pytest.raises(GroupError):
        GroupHom(klein, z4, (z4.generators[0], z4.generators[0])).element_map
    # sending the generator of Z/4 to an involution is a genuine (non-injective) map
    assert not GroupHom(z4, klein, (klein.generators[0],)).is_injective()


def test_hom_composition(klein):
    auts = automorphisms(klein)
    for f in auts:
        for g in auts:
            h = f.compose(g)
            assert all(h(x) == f(g(x)) for x in klein.elements)


def test_cayley_embedding_is_faithful():
    for name in ("klein4", "q8", "d8", "z7"):
        P = group(name)
        lam = cayley_embedding(P)
        assert lam.is_injective()
        assert lam.codomain.order == P.order


def test_klein_swap_witness(klein):
    phi = GroupHom(klein, klein, (klein.generators[1], klein.generators[0]))
    w = find_conjugator(phi)
    assert w.verify()
    assert w.conjugator in brute_force_conjugators(phi)


def test_identity_hom_has_trivial_candidates(klein):
    w = find_conjugator(identity_hom(klein))
    assert w.verify()
    # the centralizer of the regular representation of an abelian group is itself
    assert len(brute_force_conjugators(identity_hom(klein))) == 4


def test_wrong_witness_fails_verification(klein):
    phi = GroupHom(klein, klein, (klein.generators[1], klein.generators[0]))
    w = find_conjugator(phi)
    bad = type(w)(w.hom, Perm.identity(4), w.embedding)
    assert not bad.verify()


SMALL_P = [n for n in CATALOG if group(n).order <= 8]


@pytest.mark.parametrize("name", SMALL_P)
def test_conjugator_exists_for_every_injection(name):
    P = group(name)
    for Q in subgroups(P):
        for phi in injections(Q, P):
            w = find_conjugator(phi)
            assert w.verify()
            # witnesses compose: conjugating by g2*g1 realizes φ2∘φ1 on Q
            if Q.order == P.order:
                continue
            psi = inclusion(Q, P)
            assert find_conjugator(psi).verify()


@pytest.mark.parametrize("name", ["klein4", "z4"])
def test_composed_witness_realizes_composition(name):
    P = group(name)
    auts = automorphisms(P)
    lam = cayley_embedding(P)
    for f in auts:
        for g in auts:
            gf, gg = find_conjugator(f).conjugator, find_conjugator(g).conjugator
            c = gf * gg
            for q in P.elements:
                assert c * lam(q) * c.inverse() == lam(f(g(q)))
