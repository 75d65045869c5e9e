"""Object and morphism-term syntax.

Objects are binary product trees over named letters and the unit I.
Morphism terms are built from the structural primitives (unitors,
associators, the symmetry, copy and discard) with composition and
tensor.  Every node caches its fully parenthesized printed form in
``key``; printing is injective on well-formed trees, so ``key`` doubles
as a fast structural-equality witness and hash source.

The concrete text grammar (also used by the CLI):

    obj  :=  ident | "I" | "(" obj ")" | obj "*" obj        (* left assoc *)
    term :=  comp ;  comp := tens ("." comp)?               (g . f = g after f)
    tens :=  prim ("*" prim)*                               (left assoc)
    prim :=  id(A) | sigma(A) | sigma_i(A) | delta(A) | delta_i(A)
           | b(A,B,C) | b_i(A,B,C) | c(A,B) | w(A) | k(A)
           | c_m(A,B,C,D) | "(" term ")"

``c_m`` is a derived constructor: it parses to its defining composite
(see :func:`middle_interchange`) so graphs and rewriting treat it
uniformly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import ParseError

__all__ = [
    "Letter", "Obj", "Atom", "Unit", "Prod",
    "Term", "Id", "LUnit", "LUnitInv", "RUnit", "RUnitInv",
    "Assoc", "AssocInv", "Swap", "Copy", "Discard", "Comp", "Tensor",
    "OVar", "MVar",
    "parse_obj", "print_obj", "parse_term", "print_term",
    "letter_occurrences", "occ_count", "is_diversified",
    "middle_interchange", "comp_list", "compose_list",
    "occurrence_path", "replace_occurrence", "wrap_occurrence", "tensor_wrap",
]

_IDENT = re.compile(r"[a-z][A-Za-z0-9_']*\Z")


@dataclass(frozen=True, order=True)
class Letter:
    """A named generator object; letters are ordered lexicographically."""

    name: str

    def __post_init__(self):
        if not _IDENT.match(self.name):
            raise ValueError(f"letter names must be lowercase-initial identifiers, got {self.name!r}")

    def __str__(self):
        return self.name


class _Keyed:
    """Mixin giving key-based equality and hashing to tree nodes."""

    __slots__ = ()
    key: str

    def __eq__(self, other):
        return self is other or (type(other) is type(self) and self.key == other.key)

    def __hash__(self):
        return hash(self.key)

    def __str__(self):
        return self.key


class Obj(_Keyed):
    """Base class of object trees."""


@dataclass(frozen=True, eq=False)
class Atom(Obj):
    letter: Letter
    key: str = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "key", self.letter.name)


@dataclass(frozen=True, eq=False)
class Unit(Obj):
    key: str = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "key", "I")


@dataclass(frozen=True, eq=False)
class Prod(Obj):
    left: Obj
    right: Obj
    key: str = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "key", f"({self.left.key}*{self.right.key})")


@dataclass(frozen=True, eq=False)
class OVar(Obj):
    """Object metavariable, used only inside rewrite-rule patterns."""

    name: str
    key: str = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "key", f"?{self.name}")


class Term(_Keyed):
    """Base class of morphism-term trees."""


def _node(fmt):
    def decorate(cls):
        def __post_init__(self):
            object.__setattr__(self, "key", fmt(self))

        cls.__post_init__ = __post_init__
        return dataclass(frozen=True, eq=False)(cls)
    return decorate


@_node(lambda s: f"id({s.a.key})")
class Id(Term):
    a: Obj
    key: str = field(init=False, repr=False)


@_node(lambda s: f"sigma({s.a.key})")
class LUnit(Term):
    """I*A -> A"""
    a: Obj
    key: str = field(init=False, repr=False)


@_node(lambda s: f"sigma_i({s.a.key})")
class LUnitInv(Term):
    """A -> I*A"""
    a: Obj
    key: str = field(init=False, repr=False)


@_node(lambda s: f"delta({s.a.key})")
class RUnit(Term):
    """A*I -> A"""
    a: Obj
    key: str = field(init=False, repr=False)


@_node(lambda s: f"delta_i({s.a.key})")
class RUnitInv(Term):
    """A -> A*I"""
    a: Obj
    key: str = field(init=False, repr=False)


@_node(lambda s: f"b({s.a.key},{s.b.key},{s.c.key})")
class Assoc(Term):
    """A*(B*C) -> (A*B)*C"""
    a: Obj
    b: Obj
    c: Obj
    key: str = field(init=False, repr=False)


@_node(lambda s: f"b_i({s.a.key},{s.b.key},{s.c.key})")
class AssocInv(Term):
    """(A*B)*C -> A*(B*C)"""
    a: Obj
    b: Obj
    c: Obj
    key: str = field(init=False, repr=False)


@_node(lambda s: f"c({s.a.key},{s.b.key})")
class Swap(Term):
    """A*B -> B*A"""
    a: Obj
    b: Obj
    key: str = field(init=False, repr=False)


@_node(lambda s: f"w({s.a.key})")
class Copy(Term):
    """A -> A*A"""
    a: Obj
    key: str = field(init=False, repr=False)


@_node(lambda s: f"k({s.a.key})")
class Discard(Term):
    """A -> I"""
    a: Obj
    key: str = field(init=False, repr=False)


@_node(lambda s: f"({s.after.key} . {s.before.key})")
class Comp(Term):
    after: Term
    before: Term
    key: str = field(init=False, repr=False)


@_node(lambda s: f"({s.left.key} * {s.right.key})")
class Tensor(Term):
    left: Term
    right: Term
    key: str = field(init=False, repr=False)


@_node(lambda s: f"?{s.name}")
class MVar(Term):
    """Morphism metavariable, used only inside rewrite-rule patterns."""
    name: str
    key: str = field(init=False, repr=False)


def print_obj(a: Obj) -> str:
    """Fully parenthesized text; round-trips through parse_obj."""
    return a.key


def print_term(t: Term) -> str:
    """Fully parenthesized text; round-trips through parse_term."""
    return t.key


def letter_occurrences(a: Obj) -> tuple[Letter, ...]:
    """Left-to-right letters of ``a``; unit leaves contribute nothing."""
    out: list[Letter] = []
    stack = [a]
    while stack:
        node = stack.pop()
        if isinstance(node, Atom):
            out.append(node.letter)
        elif isinstance(node, Prod):
            stack.append(node.right)
            stack.append(node.left)
    return tuple(out)


def occ_count(a: Obj) -> int:
    return len(letter_occurrences(a))


def is_diversified(a: Obj) -> bool:
    """True when no letter occurs twice in ``a``."""
    occ = letter_occurrences(a)
    return len(occ) == len(set(occ))


def middle_interchange(a: Obj, b: Obj, c: Obj, d: Obj) -> Term:
    """The derived (A*B)*(C*D) -> (A*C)*(B*D) interchange composite."""
    inner = Comp(Comp(AssocInv(c, b, d), Tensor(Swap(b, c), Id(d))), Assoc(b, c, d))
    return Comp(Comp(Assoc(a, c, Prod(b, d)), Tensor(Id(a), inner)), AssocInv(a, b, Prod(c, d)))


def comp_list(t: Term) -> list[Term]:
    """Flatten nested compositions; result is in composition order (last applied first)."""
    out: list[Term] = []
    stack = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, Comp):
            stack.append(node.before)
            stack.append(node.after)
        else:
            out.append(node)
    return out


def compose_list(factors, fallback_obj: Obj | None = None) -> Term:
    """Right-nested composition of ``factors`` (first element applied last)."""
    factors = list(factors)
    if not factors:
        if fallback_obj is None:
            raise ValueError("cannot compose an empty factor list without a fallback object")
        return Id(fallback_obj)
    out = factors[-1]
    for f in reversed(factors[:-1]):
        out = Comp(f, out)
    return out


# ---------------------------------------------------------------------------
# occurrence bookkeeping


def occurrence_path(a: Obj, i: int) -> list[tuple[str, Obj]]:
    """Path from the root of ``a`` to its i-th letter occurrence (1-based).

    Each step is ('L', right_sibling) or ('R', left_sibling).
    """
    if not 1 <= i <= occ_count(a):
        raise IndexError(f"occurrence {i} out of range for {a.key}")
    path: list[tuple[str, Obj]] = []
    node = a
    while isinstance(node, Prod):
        nl = occ_count(node.left)
        if i <= nl:
            path.append(("L", node.right))
            node = node.left
        else:
            path.append(("R", node.left))
            node = node.right
            i -= nl
    assert isinstance(node, Atom)
    return path


def replace_occurrence(a: Obj, i: int, repl: Obj) -> Obj:
    """Replace the i-th letter occurrence of ``a`` by the object ``repl``."""
    if isinstance(a, Atom):
        if i != 1:
            raise IndexError(f"occurrence {i} out of range for {a.key}")
        return repl
    if isinstance(a, Prod):
        nl = occ_count(a.left)
        if i <= nl:
            return Prod(replace_occurrence(a.left, i, repl), a.right)
        return Prod(a.left, replace_occurrence(a.right, i - nl, repl))
    raise IndexError(f"occurrence {i} out of range for {a.key}")


def tensor_wrap(path, inner: Term) -> Term:
    """Wrap ``inner`` in identity tensors along an occurrence path."""
    out = inner
    for side, sibling in reversed(list(path)):
        out = Tensor(out, Id(sibling)) if side == "L" else Tensor(Id(sibling), out)
    return out


def wrap_occurrence(a: Obj, i: int, inner: Term) -> Term:
    """Identity-wrap ``inner`` so it acts at the i-th letter occurrence of ``a``."""
    return tensor_wrap(occurrence_path(a, i), inner)


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:([a-z][A-Za-z0-9_']*)|(I)|([()*.,])|(\S))")


class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.toks: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None:
                break
            ident, unit, sym, bad = m.groups()
            at = m.start(1) if ident else m.start(2) if unit else m.start(3) if sym else m.start(4)
            if bad is not None:
                raise ParseError(f"unexpected character {bad!r}", at)
            if ident is not None:
                self.toks.append(("ident", ident, at))
            elif unit is not None:
                self.toks.append(("unit", "I", at))
            else:
                self.toks.append((sym, sym, at))
            pos = m.end()
        self.toks.append(("end", "", len(text)))
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str):
        tok = self.next()
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        return tok


def _parse_obj(tk: _Tokens) -> Obj:
    node = _parse_obj_primary(tk)
    while tk.peek()[0] == "*":
        tk.next()
        node = Prod(node, _parse_obj_primary(tk))
    return node


def _parse_obj_primary(tk: _Tokens) -> Obj:
    kind, value, at = tk.next()
    if kind == "ident":
        return Atom(Letter(value))
    if kind == "unit":
        return Unit()
    if kind == "(":
        node = _parse_obj(tk)
        tk.expect(")")
        return node
    raise ParseError(f"expected an object, found {value!r}", at)


def parse_obj(text: str) -> Obj:
    tk = _Tokens(text)
    node = _parse_obj(tk)
    kind, value, at = tk.peek()
    if kind != "end":
        raise ParseError(f"unexpected trailing input {value!r}", at)
    return node


_PRIM_ARITY = {
    "id": 1, "sigma": 1, "sigma_i": 1, "delta": 1, "delta_i": 1,
    "b": 3, "b_i": 3, "c": 2, "w": 1, "k": 1, "c_m": 4,
}


def _parse_args(tk: _Tokens, n: int) -> list[Obj]:
    tk.expect("(")
    args = [_parse_obj(tk)]
    while tk.peek()[0] == ",":
        tk.next()
        args.append(_parse_obj(tk))
    tk.expect(")")
    if len(args) != n:
        raise ParseError(f"expected {n} object argument(s), got {len(args)}", tk.peek()[2])
    return args


def _parse_term_primary(tk: _Tokens) -> Term:
    kind, value, at = tk.peek()
    if kind == "(":
        tk.next()
        node = _parse_term(tk)
        tk.expect(")")
        return node
    if kind != "ident":
        raise ParseError(f"expected a term, found {value!r}", at)
    tk.next()
    if value not in _PRIM_ARITY:
        raise ParseError(f"unknown primitive {value!r}", at)
    args = _parse_args(tk, _PRIM_ARITY[value])
    match value:
        case "id":
            return Id(args[0])
        case "sigma":
            return LUnit(args[0])
        case "sigma_i":
            return LUnitInv(args[0])
        case "delta":
            return RUnit(args[0])
        case "delta_i":
            return RUnitInv(args[0])
        case "b":
            return Assoc(*args)
        case "b_i":
            return AssocInv(*args)
        case "c":
            return Swap(*args)
        case "w":
            return Copy(args[0])
        case "k":
            return Discard(args[0])
        case "c_m":
            return middle_interchange(*args)
    raise AssertionError(value)


def _parse_tensor(tk: _Tokens) -> Term:
    node = _parse_term_primary(tk)
    while tk.peek()[0] == "*":
        tk.next()
        node = Tensor(node, _parse_term_primary(tk))
    return node


def _parse_term(tk: _Tokens) -> Term:
    node = _parse_tensor(tk)
    if tk.peek()[0] == ".":
        tk.next()
        return Comp(node, _parse_term(tk))
    return node


def parse_term(text: str) -> Term:
    tk = _Tokens(text)
    node = _parse_term(tk)
    kind, value, at = tk.peek()
    if kind != "end":
        raise ParseError(f"unexpected trailing input {value!r}", at)
    return node
