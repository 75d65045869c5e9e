"""Kinds, admission, and domain/codomain inference for morphism terms."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import KindViolation, TypeMismatch
from .syntax import (
    Assoc, AssocInv, Comp, Copy, Discard, Id, LUnit, LUnitInv, Obj, Prod,
    RUnit, RUnitInv, Swap, Tensor, Term, Unit,
)

__all__ = ["Kind", "kind_leq", "MorType", "infer_type", "admits", "parse_kind"]


class Kind(Enum):
    MON = "mon"
    SYMON = "symon"
    REL = "rel"
    AFF = "aff"
    CART = "cart"

    def __str__(self):
        return self.value


# Reflexive-transitive order: MON < SYMON < REL < CART and SYMON < AFF < CART.
_UPSETS = {
    Kind.MON: {Kind.MON, Kind.SYMON, Kind.REL, Kind.AFF, Kind.CART},
    Kind.SYMON: {Kind.SYMON, Kind.REL, Kind.AFF, Kind.CART},
    Kind.REL: {Kind.REL, Kind.CART},
    Kind.AFF: {Kind.AFF, Kind.CART},
    Kind.CART: {Kind.CART},
}


def kind_leq(lower: Kind, upper: Kind) -> bool:
    return upper in _UPSETS[lower]


def parse_kind(text: str) -> Kind:
    try:
        return Kind(text.lower())
    except ValueError:
        raise ValueError(f"unknown kind {text!r}; expected one of mon, symon, rel, aff, cart") from None


@dataclass(frozen=True)
class MorType:
    dom: Obj
    cod: Obj

    def __str__(self):
        return f"{self.dom.key} -> {self.cod.key}"


def _prim_type(t: Term) -> MorType | None:
    match t:
        case Id(a=a):
            return MorType(a, a)
        case LUnit(a=a):
            return MorType(Prod(Unit(), a), a)
        case LUnitInv(a=a):
            return MorType(a, Prod(Unit(), a))
        case RUnit(a=a):
            return MorType(Prod(a, Unit()), a)
        case RUnitInv(a=a):
            return MorType(a, Prod(a, Unit()))
        case Assoc(a=a, b=b, c=c):
            return MorType(Prod(a, Prod(b, c)), Prod(Prod(a, b), c))
        case AssocInv(a=a, b=b, c=c):
            return MorType(Prod(Prod(a, b), c), Prod(a, Prod(b, c)))
        case Swap(a=a, b=b):
            return MorType(Prod(a, b), Prod(b, a))
        case Copy(a=a):
            return MorType(a, Prod(a, a))
        case Discard(a=a):
            return MorType(a, Unit())
    return None


def _min_kinds(t: Term) -> set[Kind]:
    """Kinds admitting the primitive ``t``."""
    if isinstance(t, Swap):
        return _UPSETS[Kind.SYMON]
    if isinstance(t, Copy):
        return _UPSETS[Kind.REL]
    if isinstance(t, Discard):
        return _UPSETS[Kind.AFF]
    return _UPSETS[Kind.MON]


def infer_type(t: Term, kind: Kind = Kind.CART, _path: tuple = ()) -> MorType:
    """Domain and codomain of ``t``; independent of ``kind`` whenever it succeeds.

    Raises KindViolation when a primitive is not admitted by ``kind`` and
    TypeMismatch when a composition's inner objects disagree; both carry
    the offending subterm path as child indices (0 = after/left).
    """
    if isinstance(t, Comp):
        after = infer_type(t.after, kind, _path + (0,))
        before = infer_type(t.before, kind, _path + (1,))
        if before.cod != after.dom:
            raise TypeMismatch(
                f"cannot compose: codomain {before.cod.key} of the inner factor "
                f"differs from domain {after.dom.key} of the outer factor",
                _path,
            )
        return MorType(before.dom, after.cod)
    if isinstance(t, Tensor):
        left = infer_type(t.left, kind, _path + (0,))
        right = infer_type(t.right, kind, _path + (1,))
        return MorType(Prod(left.dom, right.dom), Prod(left.cod, right.cod))
    mt = _prim_type(t)
    if mt is None:
        raise TypeMismatch(f"not a morphism term: {t!r}", _path)
    if kind not in _min_kinds(t):
        raise KindViolation(f"primitive {t.key} is not admitted by kind {kind}", _path)
    return mt


def admits(kind: Kind, t: Term) -> bool:
    """True when every primitive occurring in ``t`` is admitted by ``kind``."""
    if isinstance(t, Comp):
        return admits(kind, t.after) and admits(kind, t.before)
    if isinstance(t, Tensor):
        return admits(kind, t.left) and admits(kind, t.right)
    return kind in _min_kinds(t)
