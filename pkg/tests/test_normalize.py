import random

import pytest

from substrcat.coherence import decide_equal
from substrcat.errors import ShapeViolation
from substrcat.graphs import graph_of
from substrcat.normalize import (
    ForkTree, aff_normal_form, factor_w_composition, is_atomic_copy_product,
    is_left_atomic_copy_product, product_decompose, rel_normal_form,
    split_w_composition,
)
from substrcat.oracle import random_diversified_object, random_term, random_term_from
from substrcat.syntax import (
    Atom, Letter, compose_list, is_diversified, letter_occurrences, parse_term,
    print_term,
)
from substrcat.typecheck import Kind, infer_type

T = parse_term

RUNNING_EXAMPLE = (
    "((id(p)*w(p)) * id((p*p)*p))"
    " . (id(p*p) * (w(p)*id(p)))"
    " . (id(p*p) * w(p))"
    " . (w(p)*id(p))"
    " . w(p)"
)


def keys(terms):
    return [print_term(t) for t in terms]


def test_product_decompose_examples():
    out = product_decompose(T("id(q) * (w(p*p) . w(p))"))
    assert keys(out) == ["(id(q) * w((p*p)))", "(id(q) * w(p))"]
    out = product_decompose(T("id(p*q)"))
    assert keys(out) == ["id((p*q))"]
    # left factor applied first: w(p)*id(q) below, then id(p*p)*k(q) above
    out = product_decompose(T("w(p) * k(q)"))
    assert keys(out) == ["(id((p*p)) * k(q))", "(w(p) * id(q))"]
    composed = compose_list(out)
    assert decide_equal(composed, T("w(p) * k(q)"), Kind.CART).equal


def test_product_decompose_random_terms_recompose():
    for kind in Kind:
        for seed in range(25):
            f = random_term(kind, 5, seed)
            out = product_decompose(f)
            assert decide_equal(compose_list(out), f, kind).equal


def test_fork_tree_of_running_example():
    tree = ForkTree.of(T(RUNNING_EXAMPLE))
    assert tree.weight == 3
    assert tree.leaf_count == 6


def test_fork_tree_weight_zero_for_left_combs():
    assert ForkTree.of(T("w(p)")).weight == 0
    assert ForkTree.of(T("(w(p)*id(p)) . w(p)")).weight == 0
    assert ForkTree.of(T("(id(p)*w(p)) . w(p)")).weight == 1


def test_factorization_of_running_example_matches_displayed_form():
    b_part, w_part = factor_w_composition(T(RUNNING_EXAMPLE))
    assert keys(b_part) == [
        "b_i((p*(p*p)),(p*p),p)",
        "(b_i((p*(p*p)),p,p) * id(p))",
        "(((b_i(p,p,p) * id(p)) * id(p)) * id(p))",
    ]
    assert keys(w_part) == [
        "((((w(p) * id(p)) * id(p)) * id(p)) * id(p))",
        "(((w(p) * id(p)) * id(p)) * id(p))",
        "((w(p) * id(p)) * id(p))",
        "(w(p) * id(p))",
        "w(p)",
    ]


def test_factorization_measure_strictly_decreases():
    trace = []
    factor_w_composition(T(RUNNING_EXAMPLE), trace)
    measures = [entry["measure"] for entry in trace]
    assert measures[0] == 3 and measures[-1] == 0
    # reorder rounds repeat the measure; rotations strictly drop it
    drops = [a - b for a, b in zip(measures, measures[1:])]
    assert all(d >= 0 for d in drops)
    assert sum(1 for d in drops if d > 0) == 3


def test_factorization_trivial_cases():
    b, w = factor_w_composition(T("w(p)"))
    assert b == [] and keys(w) == ["w(p)"]
    b, w = factor_w_composition(T("(w(p)*id(p)) . w(p)"))
    assert b == [] and keys(w) == ["(w(p) * id(p))", "w(p)"]


def test_factorization_output_is_left_atomic_and_equal():
    rng = random.Random(23)
    for _ in range(40):
        # random copy composition from a letter
        term = random_copy_composition(rng, max_forks=5)
        b, w = factor_w_composition(term)
        assert all(is_left_atomic_copy_product(t) for t in w)
        whole = compose_list(b + w)
        assert decide_equal(whole, term, Kind.REL).equal


def random_copy_composition(rng, max_forks=5, letter="p"):
    from substrcat.syntax import Comp, Copy, replace_occurrence, wrap_occurrence, Prod

    obj = Atom(Letter(letter))
    term = None
    for _ in range(rng.randint(1, max_forks)):
        occ = rng.randint(1, len(letter_occurrences(obj)))
        step = wrap_occurrence(obj, occ, parse_term(f"w({letter})"))
        term = step if term is None else Comp(step, term)
        obj = replace_occurrence(obj, occ, Prod(Atom(Letter(letter)), Atom(Letter(letter))))
    return term


def test_split_examples():
    v, mid, u = split_w_composition(T("w(p)"), 1, 2)
    assert v == [] and print_term(mid) == "w(p)" and u == []
    v, mid, u = split_w_composition(T("(w(p)*id(p)) . w(p)"), 1, 3)
    assert print_term(mid) == "(w(p) * id(p))"
    assert decide_equal(compose_list(v + [mid] + u),
                        T("(w(p)*id(p)) . w(p)"), Kind.REL).equal
    v, mid, u = split_w_composition(T("(w(p)*id(p)) . w(p)"), 2, 3)
    assert print_term(mid) == "(id(p) * w(p))"
    assert keys(v) == ["b(p,p,p)"]
    assert decide_equal(compose_list(v + [mid] + u), T("(w(p)*id(p)) . w(p)"), Kind.REL).equal


def test_split_random_positions():
    rng = random.Random(99)
    for _ in range(25):
        term = random_copy_composition(rng, max_forks=5)
        k = len(letter_occurrences(infer_type(term, Kind.REL).cod))
        i = rng.randint(1, k - 1)
        v, mid, u = split_w_composition(term, i)
        assert decide_equal(compose_list(v + [mid] + u), term, Kind.REL).equal


def test_split_index_out_of_range():
    with pytest.raises(IndexError):
        split_w_composition(T("w(p)"), 2)
    with pytest.raises(ShapeViolation):
        split_w_composition(T("w(p)"), 1, k=5)


def test_split_rejects_non_copy_compositions():
    with pytest.raises(ShapeViolation):
        split_w_composition(T("c(p,p) . w(p)"), 1)
    with pytest.raises(ShapeViolation):
        factor_w_composition(T("w(p*q)"))


def test_rel_normal_form_worked_example():
    h = T("(id(q) * (w(p*p) . w(p))) . c(p,q)")
    nf = rel_normal_form(h)
    assert keys(nf.prefix) == [
        "(((w(p) * id(p)) * id(p)) * id(q))",
        "((w(p) * id(p)) * id(q))",
        "(w(p) * id(q))",
    ]
    # the final bracket fix lands at the tail end, exactly as displayed
    assert print_term(nf.tail[-1]) == "((b_i(p,p,p) * id(p)) * id(q))"
    assert nf.check()
    assert decide_equal(nf.term(), h, Kind.REL).equal


def test_rel_normal_form_trivial_cases():
    nf = rel_normal_form(T("id(p)"))
    assert nf.prefix == () and keys(nf.tail) == ["id(p)"]
    nf = rel_normal_form(T("c(p,q)"))
    assert nf.prefix == () and keys(nf.tail) == ["c(p,q)"]


def test_rel_normal_form_requires_diversified_domain():
    with pytest.raises(ShapeViolation):
        rel_normal_form(T("w(p) * id(p)"))


def test_rel_normal_form_random():
    rng = random.Random(41)
    for seed in range(60):
        dom = random_diversified_object(rng.randint(1, 3), seed)
        f = random_term_from(rng, Kind.REL, dom, 6)
        nf = rel_normal_form(f)
        assert nf.check()
        assert infer_type(nf.term(), Kind.REL) == infer_type(f, Kind.REL)
        assert graph_of(nf.term(), Kind.REL) == graph_of(f, Kind.REL)


def test_rel_prefix_is_canonical_for_equal_terms():
    # the prefix only depends on the codomain letter multiplicities
    f = T("(id(q) * (w(p*p) . w(p))) . c(p,q)")
    g = T("(id(q) * ((w(p) * w(p)) . w(p))) . c(p,q)")
    assert decide_equal(f, g, Kind.REL).equal
    assert keys(rel_normal_form(f).prefix) == keys(rel_normal_form(g).prefix)


def test_aff_normal_form_examples():
    nf = aff_normal_form(T("k(p*q)"))
    assert keys(nf.prefix) == ["(id(I) * k(q))", "(k(p) * id(q))"]
    assert keys(nf.tail) == ["sigma(I)"]
    assert nf.check()
    nf = aff_normal_form(T("id(I)"))
    assert nf.prefix == () and keys(nf.tail) == ["id(I)"]
    nf = aff_normal_form(T("k(I)"))
    assert nf.prefix == () and keys(nf.tail) == ["id(I)"]


def test_aff_normal_form_random():
    for seed in range(60):
        f = random_term(Kind.AFF, 6, seed)
        nf = aff_normal_form(f)
        assert nf.check()
        assert infer_type(nf.term(), Kind.AFF) == infer_type(f, Kind.AFF)
        assert graph_of(nf.term(), Kind.AFF) == graph_of(f, Kind.AFF)
        assert decide_equal(nf.term(), f, Kind.AFF).equal


def test_aff_prefix_determined_by_dropped_occurrences():
    # same type, same dropped letters: identical prefixes
    fa = aff_normal_form(T("sigma(p) . (k(q) * id(p)) . c(p,q)"))
    ga = aff_normal_form(T("delta(p) . (id(p) * k(q))"))
    assert keys(fa.prefix) == keys(ga.prefix)


def test_normalizers_are_deterministic():
    h = T("(id(q) * (w(p*p) . w(p))) . c(p,q)")
    assert keys(rel_normal_form(h).tail) == keys(rel_normal_form(h).tail)
    f = T("k(p*q) . c(q,p)")
    assert keys(aff_normal_form(f).prefix) == keys(aff_normal_form(f).prefix)
