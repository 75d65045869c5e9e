import pytest

from substrcat.errors import KindViolation, TypeMismatch
from substrcat.oracle import random_term
from substrcat.syntax import Comp, RUnit, RUnitInv, parse_obj, parse_term
from substrcat.typecheck import Kind, MorType, admits, infer_type, kind_leq

P = parse_obj


def test_copy_typing():
    assert infer_type(parse_term("w(p)"), Kind.REL) == MorType(P("p"), P("p*p"))


def test_copy_not_monoidal():
    with pytest.raises(KindViolation):
        infer_type(parse_term("w(p)"), Kind.MON)


def test_unit_composite():
    t = Comp(RUnit(P("p")), RUnitInv(P("p")))
    assert infer_type(t, Kind.MON) == MorType(P("p"), P("p"))


def test_composition_mismatch_carries_path():
    bad = parse_term("(c(p,q) . w(p)) * id(r)")
    with pytest.raises(TypeMismatch) as err:
        infer_type(bad, Kind.REL)
    assert err.value.path == (0,)


def test_kind_violation_carries_path():
    bad = parse_term("id(q) * k(p)")
    with pytest.raises(KindViolation) as err:
        infer_type(bad, Kind.REL)
    assert err.value.path == (1,)


@pytest.mark.parametrize("kind,term,expected", [
    (Kind.SYMON, "c(p,q)", True),
    (Kind.AFF, "w(p)", False),
    (Kind.CART, "sigma(p) . (k(p) * id(p)) . w(p)", True),
    (Kind.MON, "c(p,q)", False),
    (Kind.REL, "k(p)", False),
])
def test_admits(kind, term, expected):
    assert admits(kind, parse_term(term)) is expected


def test_kind_order():
    assert kind_leq(Kind.MON, Kind.CART)
    assert kind_leq(Kind.SYMON, Kind.AFF)
    assert not kind_leq(Kind.REL, Kind.AFF)
    assert not kind_leq(Kind.AFF, Kind.REL)
    assert not kind_leq(Kind.CART, Kind.SYMON)


def test_admits_is_monotone():
    kinds = list(Kind)
    for lower in kinds:
        for upper in kinds:
            if not kind_leq(lower, upper):
                continue
            for seed in range(20):
                t = random_term(lower, 5, seed)
                assert admits(lower, t) and admits(upper, t)


def test_inferred_type_is_kind_independent():
    for seed in range(25):
        t = random_term(Kind.MON, 5, seed)
        types = {str(infer_type(t, k)) for k in Kind}
        assert len(types) == 1
