import pytest
from hypothesis import given, strategies as st

from substrcat.errors import ParseError
from substrcat.syntax import (
    Assoc, Atom, Comp, Copy, Discard, Id, Letter, LUnit, Prod, RUnit,
    RUnitInv, Swap, Tensor, Unit, is_diversified, letter_occurrences,
    middle_interchange, parse_obj, parse_term, print_obj, print_term,
)

p, q, r, s = (Atom(Letter(x)) for x in "pqrs")


def letters(obj):
    return [letter.name for letter in letter_occurrences(obj)]


def test_parse_obj_examples():
    assert parse_obj("p*(q*I)") == Prod(p, Prod(q, Unit()))
    assert parse_obj("I") == Unit()
    assert parse_obj("(p*p)*q") == Prod(Prod(p, p), q)


def test_parse_obj_star_is_left_associative():
    assert parse_obj("a*b*c") == parse_obj("(a*b)*c")
    assert parse_obj("(a*b*c)") == parse_obj("(a*b)*c")


def test_print_obj_examples():
    assert print_obj(Prod(p, Unit())) == "(p*I)"
    assert print_obj(Unit()) == "I"
    assert print_obj(q) == "q"


def test_parse_errors_carry_positions():
    with pytest.raises(ParseError) as err:
        parse_obj("p*)")
    assert err.value.position == 2
    with pytest.raises(ParseError):
        parse_obj("p q")
    with pytest.raises(ParseError):
        parse_term("nope(p)")


def test_parse_term_examples():
    assert parse_term("w(p)") == Copy(p)
    # structurally fine even though ill-typed; typing rejects it later
    assert parse_term("c(p,q) . w(p)") == Comp(Swap(p, q), Copy(p))
    assert parse_term("(id(p) * delta(q))") == Tensor(Id(p), RUnit(q))


def test_term_precedence():
    assert parse_term("w(p) * k(q) . c(q,p)") == Comp(Tensor(Copy(p), Discard(q)), Swap(q, p))
    assert parse_term("b(p,q,r) . c(q,p) . w(q)") == Comp(
        Assoc(p, q, r), Comp(Swap(q, p), Copy(q))
    )


def test_letter_occurrences():
    assert letters(parse_obj("p*(q*I)")) == ["p", "q"]
    assert letters(Unit()) == []
    assert letters(parse_obj("(p*p)*q")) == ["p", "p", "q"]


def test_occurrences_concatenate_over_products():
    a = parse_obj("p*(q*I)")
    b = parse_obj("(r*s)*p")
    assert letters(Prod(a, b)) == letters(a) + letters(b)


def test_is_diversified():
    assert is_diversified(parse_obj("p*(q*I)"))
    assert not is_diversified(parse_obj("p*p"))
    assert is_diversified(Unit())


def test_diversified_subobjects():
    obj = parse_obj("(p*q)*(r*I)")
    assert is_diversified(obj)
    assert is_diversified(obj.left) and is_diversified(obj.right)


def test_middle_interchange_is_expanded_by_parser():
    assert parse_term("c_m(p,q,r,s)") == middle_interchange(p, q, r, s)


_objs = st.deferred(
    lambda: st.one_of(
        st.sampled_from([p, q, r, Unit()]),
        st.builds(Prod, _objs, _objs),
    )
)

_terms = st.deferred(
    lambda: st.one_of(
        st.builds(Id, _objs),
        st.builds(LUnit, _objs),
        st.builds(RUnitInv, _objs),
        st.builds(Assoc, _objs, _objs, _objs),
        st.builds(Swap, _objs, _objs),
        st.builds(Copy, _objs),
        st.builds(Discard, _objs),
        st.builds(Comp, _terms, _terms),
        st.builds(Tensor, _terms, _terms),
    )
)


@given(_objs)
def test_obj_round_trip(obj):
    assert parse_obj(print_obj(obj)) == obj


@given(_terms)
def test_term_round_trip(term):
    assert parse_term(print_term(term)) == term
