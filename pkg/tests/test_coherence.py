import random

import pytest

from substrcat.coherence import (
    Hole, Verdict, conservativity_check, decide_equal, diagram_commutes,
    representative,
)
from substrcat.errors import (
    ArityMismatch, CompositionGap, EndpointMismatch, KindViolation,
)
from substrcat.graphs import Graph, graph_of
from substrcat.oracle import random_term, random_term_from
from substrcat.syntax import Prod, Unit, parse_obj, parse_term
from substrcat.typecheck import Kind, infer_type, kind_leq

T = parse_term


def test_unit_juggling_example_collapses():
    big = T(
        "((delta(p) . (id(p)*sigma(I))) * (delta(q) . sigma(q*I)))"
        " . c_m(p, I, I*I, q*I)"
        " . (id(p*I) * c_m(I,q,I,I))"
        " . (delta_i(p) * (sigma_i(q) * delta_i(I)))"
    )
    simple = T("id(p) * delta(q)")
    assert str(infer_type(big, Kind.SYMON)) == "(p*(q*I)) -> (p*q)"
    assert decide_equal(big, simple, Kind.SYMON) == Verdict(True, "same-graph")


def test_swap_differs_from_identity():
    assert decide_equal(T("c(p,p)"), T("id(p*p)"), Kind.SYMON) == \
        Verdict(False, "different-graph")


def test_swap_copy_absorption():
    assert decide_equal(T("c(p,p) . w(p)"), T("w(p)"), Kind.REL).equal


def test_cartesian_pair_example():
    t1 = T("(id(p) * c(p, q*p)) . b_i(p,p,q*p) . (id(p*p) * c(p,q)) . (w(p) * id(p*q))")
    t2 = T(
        "(id(p) * (((delta(q*p) . b(q,p,I)) * id(p)) . b(q, p*I, p)))"
        " . b_i(p, q, (p*I)*p)"
        " . ((id(p)*sigma(q)) * ((id(p)*k(q)) * id(p)))"
        " . ((id(p) * (k(p)*id(q))) * c(p, p*q))"
        " . w(p*(p*q))"
    )
    assert graph_of(t1, Kind.CART).mapping == (1, 3, 2, 1)
    assert graph_of(t2, Kind.CART).mapping == (1, 3, 2, 1)
    assert decide_equal(t1, t2, Kind.CART).equal


def test_different_types_not_equal():
    v = decide_equal(T("w(p)"), T("id(p)"), Kind.REL)
    assert v == Verdict(False, "different-type")


def test_mon_preorder():
    v = decide_equal(T("sigma(p) . sigma_i(p)"), T("id(p)"), Kind.MON)
    assert v == Verdict(True, "mon-preorder")


def test_equivalence_relation_on_hom_sets():
    terms = []
    rng = random.Random(11)
    dom = parse_obj("p*q")
    for _ in range(12):
        terms.append(random_term_from(rng, Kind.CART, dom, 4))
    for f in terms:
        assert decide_equal(f, f, Kind.CART).equal
        for g in terms:
            tf, tg = infer_type(f), infer_type(g)
            if tf != tg:
                continue
            vfg = decide_equal(f, g, Kind.CART)
            assert vfg.equal == decide_equal(g, f, Kind.CART).equal
            for h in terms:
                if infer_type(h) != tf:
                    continue
                if vfg.equal and decide_equal(g, h, Kind.CART).equal:
                    assert decide_equal(f, h, Kind.CART).equal


def test_diagram_commutes_trivial():
    assert diagram_commutes([T("delta(p)")], [T("delta(p)")], Kind.MON).equal


def test_diagram_double_translation_unit():
    # the unit arrow equals its discard-padded variant in the cartesian kind
    assert diagram_commutes(
        [T("sigma(p)")],
        [T("k(I) * id(p)"), T("sigma(p)")],
        Kind.CART,
    ).equal


def test_diagram_gap_and_endpoint_errors():
    with pytest.raises(CompositionGap):
        diagram_commutes([T("w(p)"), T("w(p)")], [T("w(p)")], Kind.REL)
    with pytest.raises(EndpointMismatch):
        diagram_commutes([T("w(p)")], [T("id(p)")], Kind.REL)


def test_representative_examples():
    box = Hole()
    t = representative(box, Prod(box, box), Graph(1, 2, (1, 1)))
    assert str(t) == "p1 -> (p1*p1)"
    t = representative(Prod(box, box), Prod(box, box), Graph(2, 2, (2, 1)))
    assert str(t) == "(p1*p2) -> (p2*p1)"
    t = representative(box, Unit(), Graph(1, 0, ()))
    assert str(t) == "p1 -> I"


def test_representative_arity_mismatch():
    with pytest.raises(ArityMismatch):
        representative(Hole(), Hole(), Graph(2, 1, (1,)))


def test_conservativity_examples():
    assert conservativity_check(T("id(I*p)"), T("sigma_i(p) . sigma(p)"), Kind.MON, Kind.SYMON)
    assert conservativity_check(T("c(p,p)"), T("id(p*p)"), Kind.SYMON, Kind.CART)
    with pytest.raises(KindViolation):
        conservativity_check(T("id(p)"), T("id(p)"), Kind.REL, Kind.AFF)
    with pytest.raises(KindViolation):
        conservativity_check(T("w(p)"), T("w(p)"), Kind.MON, Kind.SYMON)


def test_conservativity_random():
    rng = random.Random(5)
    for lower in Kind:
        uppers = [k for k in Kind if kind_leq(lower, k)]
        for seed in range(40):
            f = random_term(lower, 5, seed)
            g = random_term_from(rng, lower, infer_type(f).dom, 5)
            if infer_type(f) != infer_type(g):
                continue
            for upper in uppers:
                assert conservativity_check(f, g, lower, upper)
