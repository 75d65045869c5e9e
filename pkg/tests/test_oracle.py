import random

import pytest

from substrcat.coherence import decide_equal
from substrcat.errors import TypeMismatch
from substrcat.graphs import graph_of
from substrcat.oracle import (
    closure_equal, random_diversified_object, random_rewrite, random_term,
    random_term_from, replay, sample_same_type_pairs, schema_instance,
)
from substrcat.rewrite import RULES, canon, rewrites, rules_for, uncanon
from substrcat.syntax import is_diversified, parse_term, print_term
from substrcat.typecheck import Kind, admits, infer_type

T = parse_term


def test_unitor_inverse_is_proved():
    v = closure_equal(T("sigma(p) . sigma_i(p)"), T("id(p)"), Kind.MON)
    assert v.proved
    assert v.witness.rule_names() <= {"lunit.inv.a"}
    assert replay(T("sigma(p) . sigma_i(p)"), T("id(p)"), v.witness, Kind.MON)


def test_swap_copy_absorption_is_proved():
    f, g = T("c(p,p) . w(p)"), T("w(p)")
    v = closure_equal(f, g, Kind.REL)
    assert v.proved and len(v.witness) == 1
    assert replay(f, g, v.witness, Kind.REL)


def test_swap_vs_identity_exhausts():
    v = closure_equal(T("c(p,p)"), T("id(p*p)"), Kind.SYMON, max_depth=10, max_states=4000)
    assert v.status == "budget-exhausted"
    assert not v.space_closed


def test_type_mismatch_is_an_error():
    with pytest.raises(TypeMismatch):
        closure_equal(T("w(p)"), T("id(p)"), Kind.REL)


def test_oracle_proofs_agree_with_decider():
    # a handful of classic consequences, each provable within a small budget
    cases = [
        ("delta(p) . delta_i(p)", "id(p)", Kind.MON),
        ("sigma(I)", "delta(I)", Kind.MON),
        ("(delta(p) * id(q)) . b(p,I,q)", "id(p) * sigma(q)", Kind.MON),
        ("sigma(p) . c(p,I)", "delta(p)", Kind.SYMON),
        ("c(q,p) . c(p,q)", "id(p*q)", Kind.SYMON),
        ("sigma(I) . w(I)", "id(I)", Kind.REL),
        ("b(p,p,p) . (id(p) * w(p)) . w(p)", "(w(p) * id(p)) . w(p)", Kind.REL),
        ("k(I)", "id(I)", Kind.AFF),
        ("sigma(p) . (k(p) * id(p)) . w(p)", "id(p)", Kind.CART),
        ("delta(p) . (id(p) * k(p)) . w(p)", "id(p)", Kind.CART),
    ]
    for lhs, rhs, kind in cases:
        f, g = T(lhs), T(rhs)
        v = closure_equal(f, g, kind, max_depth=8, max_states=30_000)
        assert v.proved, (lhs, rhs)
        assert decide_equal(f, g, kind).equal
        assert replay(f, g, v.witness, kind)


def test_witness_rules_stay_in_kind():
    f, g = T("sigma(I) . w(I)"), T("id(I)")
    v = closure_equal(f, g, Kind.REL)
    allowed = {r.name for r in rules_for(Kind.REL)}
    assert v.witness.rule_names() <= allowed


def test_every_rewrite_step_preserves_type_and_graph():
    rng = random.Random(3)
    for kind in Kind:
        for seed in range(25):
            f = random_term(kind, 5, seed)
            mt = infer_type(f, kind)
            base = graph_of(f, kind)
            state = canon(f)
            for _, _, _, result in list(rewrites(state, kind))[:40]:
                back = uncanon(result)
                assert infer_type(back, kind) == mt
                assert graph_of(back, kind) == base


@pytest.mark.parametrize("kind", list(Kind))
def test_schema_sides_share_graphs(kind):
    rng = random.Random(f"schema-{kind}")
    for rule in rules_for(kind):
        for _ in range(12):
            lhs, rhs = schema_instance(rule, kind, rng)
            mt = infer_type(lhs, kind)
            assert infer_type(rhs, kind) == mt
            assert graph_of(lhs, kind) == graph_of(rhs, kind), rule.name
            assert admits(kind, lhs) and admits(kind, rhs)


def test_random_term_contract():
    for kind in Kind:
        for seed in range(30):
            t = random_term(kind, 5, seed)
            assert admits(kind, t)
            infer_type(t, kind)
            assert random_term(kind, 5, seed) == t
    dom = random_diversified_object(2, 4)
    t = random_term(Kind.REL, 5, 9, dom_hint=dom)
    assert infer_type(t, Kind.REL).dom == dom
    assert print_term(random_term(Kind.MON, 1, 2)) == print_term(random_term(Kind.MON, 1, 2))


def test_random_diversified_object_contract():
    zero = random_diversified_object(0, 1)
    assert is_diversified(zero)
    for n in (1, 2, 3, 5):
        for seed in range(10):
            obj = random_diversified_object(n, seed)
            assert is_diversified(obj)
            from substrcat.syntax import letter_occurrences
            assert len(letter_occurrences(obj)) == n
            assert obj == random_diversified_object(n, seed)


def test_rewrite_pairs_stay_equal_and_confirmable():
    rng = random.Random(17)
    for kind in Kind:
        for seed in range(10):
            f = random_term(kind, 5, seed)
            state = canon(f)
            for _ in range(2):
                nxt = random_rewrite(state, kind, rng)
                if nxt is None:
                    break
                state = nxt
            g = uncanon(state)
            assert decide_equal(f, g, kind).equal
            assert closure_equal(f, g, kind, 8, 30_000).proved


def test_sample_pairs_have_equal_types():
    for kind in (Kind.SYMON, Kind.CART):
        for f, g, how in sample_same_type_pairs(kind, 5, 40, seed=2):
            assert infer_type(f, kind) == infer_type(g, kind)
            assert how in ("rewrite", "bucket")


def test_rule_table_covers_every_kind():
    names = {r.name for r in RULES}
    assert len(names) == len(RULES)
    assert len(rules_for(Kind.MON)) < len(rules_for(Kind.SYMON)) < len(rules_for(Kind.REL))
    assert len(rules_for(Kind.CART)) == len(RULES)
