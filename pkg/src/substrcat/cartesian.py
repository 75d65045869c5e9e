"""The projection/pairing presentation of the cartesian calculus.

Terms here are built from identities, the two projections, the
terminal arrow and pairing.  The module gives the two-way translation
with the structural language, a normalization into distributed form
(compats, i.e. well-founded projection chains, closed under pairing,
with every compat expanded down to an atomic codomain), and a
recursive equality decision for diversified domains with a graph
fallback otherwise.

Text grammar: ``p1(A,B)``, ``p2(A,B)``, ``bang(A)``, ``pair(f,g)``,
``id(A)``, composition ``g . f``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ParseError, TypeMismatch
from .graphs import Graph, graph_of
from .syntax import (
    Assoc, AssocInv, Comp, Copy, Discard, Id, LUnit, LUnitInv, Obj, Prod,
    RUnit, RUnitInv, Swap, Tensor, Term, Unit, _Keyed, _Tokens, _parse_obj,
    is_diversified,
)
from .typecheck import Kind, MorType, infer_type

__all__ = [
    "StdTerm", "Proj1", "Proj2", "Terminal", "Pair", "StdComp", "StdId",
    "std_type", "parse_std_term", "print_std_term",
    "to_std", "from_std", "distribute", "atomize",
    "is_compat", "is_distributed", "is_atomic_distributed", "compat_spine",
    "std_equal", "std_graph",
]


class StdTerm(_Keyed):
    """Base class of standard-language terms."""


def _std_node(fmt):
    def decorate(cls):
        def __post_init__(self):
            object.__setattr__(self, "key", fmt(self))

        cls.__post_init__ = __post_init__
        return dataclass(frozen=True, eq=False)(cls)
    return decorate


@_std_node(lambda s: f"id({s.a.key})")
class StdId(StdTerm):
    a: Obj
    key: str = field(init=False, repr=False)


@_std_node(lambda s: f"p1({s.a.key},{s.b.key})")
class Proj1(StdTerm):
    """A*B -> A"""
    a: Obj
    b: Obj
    key: str = field(init=False, repr=False)


@_std_node(lambda s: f"p2({s.a.key},{s.b.key})")
class Proj2(StdTerm):
    """A*B -> B"""
    a: Obj
    b: Obj
    key: str = field(init=False, repr=False)


@_std_node(lambda s: f"bang({s.a.key})")
class Terminal(StdTerm):
    """A -> I"""
    a: Obj
    key: str = field(init=False, repr=False)


@_std_node(lambda s: f"pair({s.fst.key}, {s.snd.key})")
class Pair(StdTerm):
    fst: StdTerm
    snd: StdTerm
    key: str = field(init=False, repr=False)


@_std_node(lambda s: f"({s.after.key} . {s.before.key})")
class StdComp(StdTerm):
    after: StdTerm
    before: StdTerm
    key: str = field(init=False, repr=False)


def std_type(t: StdTerm, _path: tuple = ()) -> MorType:
    match t:
        case StdId(a=a):
            return MorType(a, a)
        case Proj1(a=a, b=b):
            return MorType(Prod(a, b), a)
        case Proj2(a=a, b=b):
            return MorType(Prod(a, b), b)
        case Terminal(a=a):
            return MorType(a, Unit())
        case Pair(fst=f, snd=g):
            tf = std_type(f, _path + (0,))
            tg = std_type(g, _path + (1,))
            if tf.dom != tg.dom:
                raise TypeMismatch(
                    f"pair components must share a domain: {tf.dom.key} vs {tg.dom.key}",
                    _path,
                )
            return MorType(tf.dom, Prod(tf.cod, tg.cod))
        case StdComp(after=g, before=f):
            tg = std_type(g, _path + (0,))
            tf = std_type(f, _path + (1,))
            if tf.cod != tg.dom:
                raise TypeMismatch(
                    f"cannot compose: {tf.cod.key} differs from {tg.dom.key}", _path
                )
            return MorType(tf.dom, tg.cod)
    raise TypeMismatch(f"not a standard term: {t!r}", _path)


def print_std_term(t: StdTerm) -> str:
    return t.key


def _parse_std(tk: _Tokens) -> StdTerm:
    node = _parse_std_primary(tk)
    if tk.peek()[0] == ".":
        tk.next()
        return StdComp(node, _parse_std(tk))
    return node


def _parse_std_primary(tk: _Tokens) -> StdTerm:
    kind, value, at = tk.peek()
    if kind == "(":
        tk.next()
        node = _parse_std(tk)
        tk.expect(")")
        return node
    if kind != "ident":
        raise ParseError(f"expected a standard term, found {value!r}", at)
    tk.next()
    if value == "pair":
        tk.expect("(")
        fst = _parse_std(tk)
        tk.expect(",")
        snd = _parse_std(tk)
        tk.expect(")")
        return Pair(fst, snd)
    if value not in ("id", "p1", "p2", "bang"):
        raise ParseError(f"unknown standard primitive {value!r}", at)
    tk.expect("(")
    args = [_parse_obj(tk)]
    while tk.peek()[0] == ",":
        tk.next()
        args.append(_parse_obj(tk))
    tk.expect(")")
    need = 2 if value in ("p1", "p2") else 1
    if len(args) != need:
        raise ParseError(f"{value} expects {need} object argument(s)", at)
    match value:
        case "id":
            return StdId(args[0])
        case "p1":
            return Proj1(args[0], args[1])
        case "p2":
            return Proj2(args[0], args[1])
        case "bang":
            return Terminal(args[0])
    raise AssertionError(value)


def parse_std_term(text: str) -> StdTerm:
    tk = _Tokens(text)
    node = _parse_std(tk)
    kind, value, at = tk.peek()
    if kind != "end":
        raise ParseError(f"unexpected trailing input {value!r}", at)
    return node


# ---------------------------------------------------------------------------
# the two-way translation

def to_std(t: Term) -> StdTerm:
    """Structural to standard, projection by unit-discard, pairing by copy."""
    infer_type(t, Kind.CART)
    return _to_std(t)


def _to_std(t: Term) -> StdTerm:
    match t:
        case Id(a=a):
            return StdId(a)
        case LUnit(a=a):
            return Proj2(Unit(), a)
        case LUnitInv(a=a):
            return Pair(Terminal(a), StdId(a))
        case RUnit(a=a):
            return Proj1(a, Unit())
        case RUnitInv(a=a):
            return Pair(StdId(a), Terminal(a))
        case Assoc(a=a, b=b, c=c):
            bc = Prod(b, c)
            p2 = Proj2(a, bc)
            return Pair(
                Pair(Proj1(a, bc), StdComp(Proj1(b, c), p2)),
                StdComp(Proj2(b, c), p2),
            )
        case AssocInv(a=a, b=b, c=c):
            ab = Prod(a, b)
            p1 = Proj1(ab, c)
            return Pair(
                StdComp(Proj1(a, b), p1),
                Pair(StdComp(Proj2(a, b), p1), Proj2(ab, c)),
            )
        case Swap(a=a, b=b):
            return Pair(Proj2(a, b), Proj1(a, b))
        case Copy(a=a):
            return Pair(StdId(a), StdId(a))
        case Discard(a=a):
            return Terminal(a)
        case Comp(after=g, before=f):
            return StdComp(_to_std(g), _to_std(f))
        case Tensor(left=f, right=g):
            ta = infer_type(f).dom
            tb = infer_type(g).dom
            return Pair(
                StdComp(_to_std(f), Proj1(ta, tb)),
                StdComp(_to_std(g), Proj2(ta, tb)),
            )
    raise TypeMismatch(f"not a morphism term: {t!r}")


def from_std(t: StdTerm) -> Term:
    """Standard to structural: projections discard, pairing copies."""
    std_type(t)
    return _from_std(t)


def _from_std(t: StdTerm) -> Term:
    match t:
        case StdId(a=a):
            return Id(a)
        case Proj1(a=a, b=b):
            return Comp(RUnit(a), Tensor(Id(a), Discard(b)))
        case Proj2(a=a, b=b):
            return Comp(LUnit(b), Tensor(Discard(a), Id(b)))
        case Terminal(a=a):
            return Discard(a)
        case Pair(fst=f, snd=g):
            dom = std_type(f).dom
            return Comp(Tensor(_from_std(f), _from_std(g)), Copy(dom))
        case StdComp(after=g, before=f):
            return Comp(_from_std(g), _from_std(f))
    raise TypeMismatch(f"not a standard term: {t!r}")


def std_graph(t: StdTerm) -> Graph:
    """Occurrence graph through the structural translation."""
    return graph_of(from_std(t), Kind.CART)


# ---------------------------------------------------------------------------
# distributed and atomic terms

def compat_spine(t: StdTerm) -> list[StdTerm] | None:
    """Projection/terminal steps of a compat, codomain first; None otherwise."""
    steps: list[StdTerm] = []
    node = t
    while isinstance(node, StdComp):
        if not isinstance(node.after, (Proj1, Proj2, Terminal)):
            return None
        steps.append(node.after)
        node = node.before
    if isinstance(node, StdId):
        return steps
    if isinstance(node, (Proj1, Proj2, Terminal)):
        steps.append(node)
        return steps
    return None


def is_compat(t: StdTerm) -> bool:
    return compat_spine(t) is not None


def _spine_term(steps: list[StdTerm], dom: Obj) -> StdTerm:
    """Canonical compat: right-nested spine, terminal collapsed by the
    unit-codomain axiom, no identities inside nonempty spines."""
    if steps and isinstance(steps[0], Terminal):
        return StdId(Unit()) if isinstance(dom, Unit) else Terminal(dom)
    out: StdTerm | None = None
    for step in reversed(steps):
        out = step if out is None else StdComp(step, out)
    return out if out is not None else StdId(dom)


def is_distributed(t: StdTerm) -> bool:
    if isinstance(t, Pair):
        return is_distributed(t.fst) and is_distributed(t.snd)
    return is_compat(t)


def is_atomic_distributed(t: StdTerm) -> bool:
    if isinstance(t, Pair):
        return is_atomic_distributed(t.fst) and is_atomic_distributed(t.snd)
    if not is_compat(t):
        return False
    return not isinstance(std_type(t).cod, Prod)


def _compose_dist(h: StdTerm, g: StdTerm) -> StdTerm:
    """Distributed composition: push pairings out, project components,
    collapse under the terminal arrow."""
    if isinstance(h, Pair):
        return Pair(_compose_dist(h.fst, g), _compose_dist(h.snd, g))
    steps = compat_spine(h)
    assert steps is not None
    g_dom = std_type(g).dom
    if isinstance(g, Pair):
        if not steps:
            return g
        last = steps[-1]
        if isinstance(last, Terminal):
            return _spine_term([Terminal(g_dom)], g_dom)
        head = _spine_term(steps[:-1], std_type(last).cod)
        picked = g.fst if isinstance(last, Proj1) else g.snd
        return _compose_dist(head, picked)
    g_steps = compat_spine(g)
    assert g_steps is not None
    return _spine_term(steps + g_steps, g_dom)


def distribute(t: StdTerm) -> StdTerm:
    """Equal distributed term: compats closed under pairing."""
    std_type(t)
    return _distribute(t)


def _distribute(t: StdTerm) -> StdTerm:
    if isinstance(t, Pair):
        return Pair(_distribute(t.fst), _distribute(t.snd))
    if isinstance(t, StdComp):
        return _compose_dist(_distribute(t.after), _distribute(t.before))
    steps = compat_spine(t)
    assert steps is not None
    return _spine_term(steps, std_type(t).dom)


def atomize(t: StdTerm) -> StdTerm:
    """Equal atomic distributed term: every compat ends at a letter or I."""
    d = distribute(t)
    return _atomize(d)


def _atomize(t: StdTerm) -> StdTerm:
    if isinstance(t, Pair):
        return Pair(_atomize(t.fst), _atomize(t.snd))
    mt = std_type(t)
    if isinstance(mt.cod, Prod):
        a, b = mt.cod.left, mt.cod.right
        return Pair(
            _atomize(_compose_dist(Proj1(a, b), t)),
            _atomize(_compose_dist(Proj2(a, b), t)),
        )
    return t


def _paths_equal(f: StdTerm, g: StdTerm) -> bool:
    """Equality of atomized terms with equal types, by codomain structure."""
    cod = std_type(f).cod
    if isinstance(cod, Unit):
        return True
    if isinstance(cod, Prod):
        assert isinstance(f, Pair) and isinstance(g, Pair)
        return _paths_equal(f.fst, g.fst) and _paths_equal(f.snd, g.snd)
    sf, sg = compat_spine(f), compat_spine(g)
    assert sf is not None and sg is not None
    return [s.key for s in sf] == [s.key for s in sg]


def std_equal(f: StdTerm, g: StdTerm) -> bool:
    """Decide equality; recursive projection-path comparison on diversified
    domains, graph comparison otherwise."""
    tf = std_type(f)
    tg = std_type(g)
    if tf != tg:
        raise TypeMismatch(f"terms have different types: {tf} vs {tg}")
    if is_diversified(tf.dom):
        return _paths_equal(atomize(f), atomize(g))
    return std_graph(f) == std_graph(g)
