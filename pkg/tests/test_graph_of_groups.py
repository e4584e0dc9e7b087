import pytest

from stablecoh.catalog import group, natural_prime
from stablecoh.graph_of_groups import (GammaPresentation, _cyclic_key, evaluate, finite_quotient,
                                       free_reduce, gamma_presentation, parse_word, perm_group_order)
from stablecoh.perm import Perm
from stablecoh.stable import CategoryError, CategorySpec, ABSTRACT, aut_category, as_abstract, cu_category, identity_category


def test_word_helpers():
    assert free_reduce(parse_word("a b b' a'")) == []
    assert _cyclic_key(parse_word("a b")) == _cyclic_key(parse_word("b a"))
    assert _cyclic_key(parse_word("a b")) == _cyclic_key(parse_word("b' a'"))


def test_z2_identity_presentation():
    pres = gamma_presentation(identity_category(group("z2"), 2))
    assert pres.to_text() == "gen a\ngen t1\nrel a a\nrel t1 a t1' a'\n"


def test_vertex_relation_counts():
    assert gamma_presentation(identity_category(group("klein4"), 2)).vertex_relation_count == 4
    pres = gamma_presentation(aut_category(group("klein4"), 2))
    assert (len(pres.generators), len(pres.relations)) == (8, 16)


@pytest.mark.parametrize("C", [aut_category(group("klein4"), 2), cu_category(group("z4"), 2),
                               as_abstract(aut_category(group("z4"), 2))], ids=["aut", "cu", "abstract"])
def test_text_round_trip(C):
    pres = gamma_presentation(C)
    assert GammaPresentation.from_text(pres.to_text()) == pres


def test_text_parse_errors():
    with pytest.raises(ValueError):
        GammaPresentation.from_text("gen a\nrel a b\n")
    with pytest.raises(ValueError):
        GammaPresentation.from_text("generator a\n")


def test_disconnected_abstract_has_no_gamma():
    C = CategorySpec(2, ABSTRACT, {"A": group("z2"), "B": group("z4")}, [])
    with pytest.raises(CategoryError):
        gamma_presentation(C)


@pytest.mark.parametrize("preset,name,order", [("aut", "klein4", 24), ("cu", "z4", 8),
                                               ("aut", "d8", 64), ("cu", "q8", 192)])
def test_finite_quotient_orders(preset, name, order):
    build = {"aut": aut_category, "cu": cu_category}[preset]
    q = finite_quotient(build(group(name), 2))
    assert q.ok
    assert q.image_order == order


def test_evaluate_and_order():
    a, b = Perm.parse("(1 2)", 3), Perm.parse("(1 2 3)", 3)
    assert evaluate(parse_word("a a"), {"a": a}, 3).is_identity()
    assert evaluate(parse_word("b b'"), {"b": b}, 3).is_identity()
    assert perm_group_order(3, [a, b]) == 6
    assert perm_group_order(3, []) == 1


def test_quotient_detects_broken_relation():
    C = aut_category(group("klein4"), 2)
    pres = gamma_presentation(C)
    # a acts on P by a nontrivial translation, so "a = 1" must fail
    bad = GammaPresentation(pres.generators, pres.relations + [parse_word("a")])
    rep = finite_quotient(C, bad)
    assert not rep.relations_ok and not rep.ok
