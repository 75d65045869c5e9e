"""Equational rewriting over flattened composition sequences.

A term is canonicalized to a sequence of factors (identity factors
dropped, compositions flattened at every nesting level), so the two
categorial equations hold by representation.  A factor is either a
non-identity primitive or a tensor of two canonical sequences.  Rules
are bidirectional schemas over object and morphism metavariables;
matching finds a contiguous window of a (possibly nested) sequence,
morphism metavariables match arbitrary sub-windows, and a rule
direction is enabled only when it binds every variable the other side
needs.  The functorial equations stay explicit rules in both
directions; they mediate product decomposition and cannot be made
structural without losing derivations.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .syntax import (
    Assoc, AssocInv, Comp, Copy, Discard, Id, LUnit, LUnitInv, MVar, Obj,
    OVar, Prod, RUnit, RUnitInv, Swap, Tensor, Term, Unit,
    compose_list, middle_interchange,
)
from .typecheck import Kind, _prim_type, kind_leq

__all__ = [
    "SeqTerm", "TensorF", "canon", "uncanon",
    "Rule", "RULES", "rules_for", "rewrites", "apply_at", "schema_bindings",
]


@dataclass(frozen=True, eq=False)
class SeqTerm:
    """A canonical composition: factors[0] is applied last."""

    dom: Obj
    cod: Obj
    factors: tuple
    key: str = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(
            self,
            "key",
            f"{self.dom.key}>{self.cod.key}|" + ";".join(f.key for f in self.factors),
        )
        if __debug__ and self.factors:
            assert _fcod(self.factors[0]) == self.cod
            assert _fdom(self.factors[-1]) == self.dom
            for left, right in zip(self.factors, self.factors[1:]):
                assert _fdom(left) == _fcod(right)

    def __eq__(self, other):
        return isinstance(other, SeqTerm) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __str__(self):
        return self.key


@dataclass(frozen=True, eq=False)
class TensorF:
    """A tensor factor of two canonical sequences."""

    left: SeqTerm
    right: SeqTerm
    dom: Obj = field(init=False, repr=False)
    cod: Obj = field(init=False, repr=False)
    key: str = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "dom", Prod(self.left.dom, self.right.dom))
        object.__setattr__(self, "cod", Prod(self.left.cod, self.right.cod))
        object.__setattr__(self, "key", f"[{self.left.key} x {self.right.key}]")

    def __eq__(self, other):
        return isinstance(other, TensorF) and self.key == other.key

    def __hash__(self):
        return hash(self.key)


def _fdom(factor) -> Obj:
    if isinstance(factor, TensorF):
        return factor.dom
    return _prim_type(factor).dom


def _fcod(factor) -> Obj:
    if isinstance(factor, TensorF):
        return factor.cod
    return _prim_type(factor).cod


def canon(t: Term) -> SeqTerm:
    """Flatten to a canonical sequence; identity factors vanish."""
    if isinstance(t, Comp):
        after = canon(t.after)
        before = canon(t.before)
        assert after.dom == before.cod, f"ill-typed composition: {t.key}"
        return SeqTerm(before.dom, after.cod, after.factors + before.factors)
    if isinstance(t, Tensor):
        tf = TensorF(canon(t.left), canon(t.right))
        return SeqTerm(tf.dom, tf.cod, (tf,))
    if isinstance(t, Id):
        return SeqTerm(t.a, t.a, ())
    mt = _prim_type(t)
    if mt is None:
        raise TypeError(f"not a morphism term: {t!r}")
    return SeqTerm(mt.dom, mt.cod, (t,))


def _factor_term(factor) -> Term:
    if isinstance(factor, TensorF):
        return Tensor(uncanon(factor.left), uncanon(factor.right))
    return factor


def uncanon(s: SeqTerm) -> Term:
    return compose_list([_factor_term(f) for f in s.factors], fallback_obj=s.dom)


def _cuts(s: SeqTerm) -> list[Obj]:
    cuts = [s.cod]
    for f in s.factors:
        cuts.append(_fdom(f))
    return cuts


# ---------------------------------------------------------------------------
# pattern compilation

_PRIM_FIELDS = {
    LUnit: ("a",), LUnitInv: ("a",), RUnit: ("a",), RUnitInv: ("a",),
    Assoc: ("a", "b", "c"), AssocInv: ("a", "b", "c"),
    Swap: ("a", "b"), Copy: ("a",), Discard: ("a",),
}


@dataclass(frozen=True)
class _CSeq:
    elems: tuple
    domp: object = None
    codp: object = None


def _compile(tree) -> _CSeq:
    if isinstance(tree, MVar):
        return _CSeq((("var", tree.name),))
    if isinstance(tree, Id):
        return _CSeq((), tree.a, tree.a)
    if isinstance(tree, Comp):
        left = _compile(tree.after)
        right = _compile(tree.before)
        if left.elems and left.domp is not None:
            raise ValueError("identity constraint inside a composition pattern is unsupported")
        if right.elems and right.codp is not None:
            raise ValueError("identity constraint inside a composition pattern is unsupported")
        return _CSeq(
            left.elems + right.elems,
            right.domp,
            left.codp,
        )
    if isinstance(tree, Tensor):
        return _CSeq((("tensor", _compile(tree.left), _compile(tree.right)),))
    fields_ = _PRIM_FIELDS[type(tree)]
    return _CSeq((("prim", type(tree), tuple((f, getattr(tree, f)) for f in fields_)),))


def _uobj(pat, obj: Obj, b: dict) -> bool:
    """Unify an object pattern against a concrete object, extending b."""
    if isinstance(pat, OVar):
        bound = b.get(pat.name)
        if bound is None:
            b[pat.name] = obj
            return True
        return bound == obj
    if isinstance(pat, Prod):
        return isinstance(obj, Prod) and _uobj(pat.left, obj.left, b) and _uobj(pat.right, obj.right, b)
    if isinstance(pat, Unit):
        return isinstance(obj, Unit)
    return pat == obj


def _min_len(elems) -> int:
    return sum(1 for e in elems if e[0] != "var")


def _match_elems(elems, ei, factors, cuts, pos, b, metas):
    if ei == len(elems):
        yield pos, b
        return
    elem = elems[ei]
    tag = elem[0]
    if tag == "var":
        name = elem[1]
        bound = b.get(name)
        if bound is not None:
            ln = len(bound.factors)
            if pos + ln <= len(factors) and cuts[pos] == bound.cod and cuts[pos + ln] == bound.dom:
                if all(factors[pos + t].key == bound.factors[t].key for t in range(ln)):
                    yield from _match_elems(elems, ei + 1, factors, cuts, pos + ln, b, metas)
            return
        dp, cp = metas.get(name, (None, None))
        limit = len(factors) - pos - _min_len(elems[ei + 1:])
        for k in range(0, limit + 1):
            b2 = dict(b)
            wdom, wcod = cuts[pos + k], cuts[pos]
            if dp is not None and not _uobj(dp, wdom, b2):
                continue
            if cp is not None and not _uobj(cp, wcod, b2):
                continue
            b2[name] = SeqTerm(wdom, wcod, tuple(factors[pos:pos + k]))
            yield from _match_elems(elems, ei + 1, factors, cuts, pos + k, b2, metas)
        return
    if pos >= len(factors):
        return
    factor = factors[pos]
    if tag == "prim":
        _, cls, attr_pats = elem
        if type(factor) is not cls:
            return
        b2 = dict(b)
        for attr, pat in attr_pats:
            if not _uobj(pat, getattr(factor, attr), b2):
                return
        yield from _match_elems(elems, ei + 1, factors, cuts, pos + 1, b2, metas)
        return
    # tensor
    _, lpat, rpat = elem
    if type(factor) is not TensorF:
        return
    for b2 in _match_full(lpat, factor.left, b, metas):
        for b3 in _match_full(rpat, factor.right, b2, metas):
            yield from _match_elems(elems, ei + 1, factors, cuts, pos + 1, b3, metas)


def _match_full(cseq: _CSeq, sub: SeqTerm, b, metas):
    """Match a pattern against an entire child sequence."""
    cuts = _cuts(sub)
    for end, b2 in _match_elems(cseq.elems, 0, sub.factors, cuts, 0, b, metas):
        if end != len(sub.factors):
            continue
        b3 = dict(b2)
        if cseq.domp is not None and not _uobj(cseq.domp, sub.dom, b3):
            continue
        if cseq.codp is not None and not _uobj(cseq.codp, sub.cod, b3):
            continue
        yield b3


def _match_window(cseq: _CSeq, factors, cuts, start, metas):
    for end, b in _match_elems(cseq.elems, 0, factors, cuts, start, {}, metas):
        b2 = dict(b)
        if cseq.domp is not None and not _uobj(cseq.domp, cuts[end], b2):
            continue
        if cseq.codp is not None and not _uobj(cseq.codp, cuts[start], b2):
            continue
        yield end, b2


# ---------------------------------------------------------------------------
# instantiation

def _inst_obj(pat, b: dict) -> Obj:
    if isinstance(pat, OVar):
        return b[pat.name]
    if isinstance(pat, Prod):
        return Prod(_inst_obj(pat.left, b), _inst_obj(pat.right, b))
    return pat


def _inst_seq(tree, b: dict) -> SeqTerm:
    if isinstance(tree, MVar):
        value = b[tree.name]
        return value if isinstance(value, SeqTerm) else canon(value)
    if isinstance(tree, Id):
        a = _inst_obj(tree.a, b)
        return SeqTerm(a, a, ())
    if isinstance(tree, Comp):
        after = _inst_seq(tree.after, b)
        before = _inst_seq(tree.before, b)
        return SeqTerm(before.dom, after.cod, after.factors + before.factors)
    if isinstance(tree, Tensor):
        tf = TensorF(_inst_seq(tree.left, b), _inst_seq(tree.right, b))
        return SeqTerm(tf.dom, tf.cod, (tf,))
    cls = type(tree)
    prim = cls(*(_inst_obj(getattr(tree, f), b) for f in _PRIM_FIELDS[cls]))
    mt = _prim_type(prim)
    return SeqTerm(mt.dom, mt.cod, (prim,))


def inst_tree(tree, b: dict) -> Term:
    """Instantiate a schema side as a plain morphism term."""
    if isinstance(tree, MVar):
        value = b[tree.name]
        return uncanon(value) if isinstance(value, SeqTerm) else value
    if isinstance(tree, Id):
        return Id(_inst_obj(tree.a, b))
    if isinstance(tree, Comp):
        return Comp(inst_tree(tree.after, b), inst_tree(tree.before, b))
    if isinstance(tree, Tensor):
        return Tensor(inst_tree(tree.left, b), inst_tree(tree.right, b))
    cls = type(tree)
    return cls(*(_inst_obj(getattr(tree, f), b) for f in _PRIM_FIELDS[cls]))


# ---------------------------------------------------------------------------
# rule table

def _tree_vars(tree) -> tuple[set, set]:
    """Object and morphism variable names occurring in a schema side."""
    ovs: set[str] = set()
    mvs: set[str] = set()

    def walk_obj(p):
        if isinstance(p, OVar):
            ovs.add(p.name)
        elif isinstance(p, Prod):
            walk_obj(p.left)
            walk_obj(p.right)

    def walk(t):
        if isinstance(t, MVar):
            mvs.add(t.name)
        elif isinstance(t, Comp):
            walk(t.after)
            walk(t.before)
        elif isinstance(t, Tensor):
            walk(t.left)
            walk(t.right)
        elif isinstance(t, Id):
            walk_obj(t.a)
        else:
            for f in _PRIM_FIELDS[type(t)]:
                walk_obj(getattr(t, f))

    walk(tree)
    return ovs, mvs


@dataclass(frozen=True)
class Rule:
    """A bidirectional equation schema."""

    name: str
    level: str  # mon | symon | rel | aff | cart
    lhs: Term
    rhs: Term
    metas: tuple = ()  # ((mvar name, dom pattern, cod pattern), ...)

    def __post_init__(self):
        meta_map = {name: (dp, cp) for name, dp, cp in self.metas}
        object.__setattr__(self, "meta_map", meta_map)
        dirs = []
        for dirn, src, dst in (("lr", self.lhs, self.rhs), ("rl", self.rhs, self.lhs)):
            if self._binds(src) >= self._needs(dst):
                dirs.append((dirn, _compile(src), dst))
        object.__setattr__(self, "dirs", tuple(dirs))

    def _binds(self, side) -> set:
        ovs, mvs = _tree_vars(side)
        bound = set(ovs) | set(mvs)
        for name, dp, cp in self.metas:
            if name in mvs:
                for pat in (dp, cp):
                    if pat is not None:
                        sub_ovs, _ = _tree_vars(Id(pat))
                        bound |= sub_ovs
        return bound

    @staticmethod
    def _needs(side) -> set:
        ovs, mvs = _tree_vars(side)
        return set(ovs) | set(mvs)


def _mk_rules() -> tuple[Rule, ...]:
    A, B, C, D = OVar("A"), OVar("B"), OVar("C"), OVar("D")
    A1, B1, C1 = OVar("A1"), OVar("B1"), OVar("C1")
    A2, B2, C2 = OVar("A2"), OVar("B2"), OVar("C2")
    f, g, h = MVar("f"), MVar("g"), MVar("h")
    f1, g1, f2, g2 = MVar("f1"), MVar("g1"), MVar("f2"), MVar("g2")
    I = Unit()

    rules = [
        Rule("tensor.comp", "mon",
             Tensor(Comp(g1, f1), Comp(g2, f2)),
             Comp(Tensor(g1, g2), Tensor(f1, f2)),
             (("f1", A1, B1), ("g1", B1, C1), ("f2", A2, B2), ("g2", B2, C2))),
        Rule("tensor.id", "mon", Tensor(Id(A), Id(B)), Id(Prod(A, B))),
        Rule("lunit.nat", "mon",
             Comp(f, LUnit(A)),
             Comp(LUnit(B), Tensor(Id(I), f)),
             (("f", A, B),)),
        Rule("runit.nat", "mon",
             Comp(f, RUnit(A)),
             Comp(RUnit(B), Tensor(f, Id(I))),
             (("f", A, B),)),
        Rule("lunit.inv.a", "mon", Comp(LUnit(A), LUnitInv(A)), Id(A)),
        Rule("lunit.inv.b", "mon", Comp(LUnitInv(A), LUnit(A)), Id(Prod(I, A))),
        Rule("runit.inv.a", "mon", Comp(RUnit(A), RUnitInv(A)), Id(A)),
        Rule("runit.inv.b", "mon", Comp(RUnitInv(A), RUnit(A)), Id(Prod(A, I))),
        Rule("unit.coincide", "mon", LUnit(I), RUnit(I)),
        Rule("assoc.nat", "mon",
             Comp(Tensor(Tensor(f, g), h), Assoc(A, B, C)),
             Comp(Assoc(A1, B1, C1), Tensor(f, Tensor(g, h))),
             (("f", A, A1), ("g", B, B1), ("h", C, C1))),
        Rule("assoc.inv.a", "mon", Comp(Assoc(A, B, C), AssocInv(A, B, C)), Id(Prod(Prod(A, B), C))),
        Rule("assoc.inv.b", "mon", Comp(AssocInv(A, B, C), Assoc(A, B, C)), Id(Prod(A, Prod(B, C)))),
        Rule("assoc.unit", "mon",
             Comp(Tensor(RUnit(A), Id(B)), Assoc(A, I, B)),
             Tensor(Id(A), LUnit(B))),
        Rule("assoc.pentagon", "mon",
             Comp(Assoc(Prod(A, B), C, D), Assoc(A, B, Prod(C, D))),
             Comp(Comp(Tensor(Assoc(A, B, C), Id(D)), Assoc(A, Prod(B, C), D)),
                  Tensor(Id(A), Assoc(B, C, D)))),
        Rule("swap.nat", "symon",
             Comp(Tensor(g, f), Swap(A, B)),
             Comp(Swap(C, D), Tensor(f, g)),
             (("f", A, C), ("g", B, D))),
        Rule("swap.inv", "symon", Comp(Swap(B, A), Swap(A, B)), Id(Prod(A, B))),
        Rule("swap.unit", "symon", Comp(LUnit(A), Swap(A, I)), RUnit(A)),
        Rule("swap.hexagon", "symon",
             Comp(Comp(Assoc(C, A, B), Swap(Prod(A, B), C)), Assoc(A, B, C)),
             Comp(Comp(Tensor(Swap(A, C), Id(B)), Assoc(A, C, B)), Tensor(Id(A), Swap(B, C)))),
        Rule("copy.nat", "rel",
             Comp(Tensor(f, f), Copy(A)),
             Comp(Copy(B), f),
             (("f", A, B),)),
        Rule("copy.unit", "rel", Comp(LUnit(I), Copy(I)), Id(I)),
        Rule("copy.assoc", "rel",
             Comp(Comp(Assoc(A, A, A), Tensor(Id(A), Copy(A))), Copy(A)),
             Comp(Tensor(Copy(A), Id(A)), Copy(A))),
        Rule("copy.swap", "rel", Comp(Swap(A, A), Copy(A)), Copy(A)),
        Rule("copy.interchange", "rel",
             Comp(middle_interchange(A, B, A, B), Copy(Prod(A, B))),
             Tensor(Copy(A), Copy(B))),
        Rule("discard.nat", "aff",
             Discard(A),
             Comp(Discard(B), f),
             (("f", A, B),)),
        Rule("discard.unit", "aff", Discard(I), Id(I)),
        Rule("proj.right", "cart",
             Comp(Comp(LUnit(A), Tensor(Discard(A), Id(A))), Copy(A)),
             Id(A)),
        Rule("proj.left", "cart",
             Comp(Comp(RUnit(A), Tensor(Id(A), Discard(A))), Copy(A)),
             Id(A)),
    ]
    return tuple(rules)


RULES: tuple[Rule, ...] = _mk_rules()

_LEVELS = {
    Kind.MON: {"mon"},
    Kind.SYMON: {"mon", "symon"},
    Kind.REL: {"mon", "symon", "rel"},
    Kind.AFF: {"mon", "symon", "aff"},
    Kind.CART: {"mon", "symon", "rel", "aff", "cart"},
}


def rules_for(kind: Kind) -> tuple[Rule, ...]:
    return tuple(r for r in RULES if r.level in _LEVELS[kind])


# ---------------------------------------------------------------------------
# rewriting

def _positions(s: SeqTerm, prefix=()):
    yield prefix, s
    for idx, factor in enumerate(s.factors):
        if isinstance(factor, TensorF):
            yield from _positions(factor.left, prefix + ((idx, "L"),))
            yield from _positions(factor.right, prefix + ((idx, "R"),))


def _splice(s: SeqTerm, path, start, end, repl: SeqTerm) -> SeqTerm:
    if not path:
        return SeqTerm(s.dom, s.cod, s.factors[:start] + repl.factors + s.factors[end:])
    (idx, side), rest = path[0], path[1:]
    factor = s.factors[idx]
    if side == "L":
        new_factor = TensorF(_splice(factor.left, rest, start, end, repl), factor.right)
    else:
        new_factor = TensorF(factor.left, _splice(factor.right, rest, start, end, repl))
    return SeqTerm(s.dom, s.cod, s.factors[:idx] + (new_factor,) + s.factors[idx + 1:])


def rewrites(s: SeqTerm, kind: Kind):
    """All single-rule rewrites of ``s`` at any position, deterministically ordered.

    Yields (rule name, direction, position, result).
    """
    rules = rules_for(kind)
    for path, seq in _positions(s):
        factors = seq.factors
        cuts = _cuts(seq)
        n = len(factors)
        for rule in rules:
            for dirn, cpat, out in rule.dirs:
                for start in range(n + 1):
                    if cpat.elems:
                        first = cpat.elems[0]
                        if first[0] == "prim" and (start >= n or type(factors[start]) is not first[1]):
                            continue
                        if first[0] == "tensor" and (start >= n or type(factors[start]) is not TensorF):
                            continue
                    for end, b in _match_window(cpat, factors, cuts, start, rule.meta_map):
                        repl = _inst_seq(out, b)
                        assert repl.cod == cuts[start] and repl.dom == cuts[end], (
                            f"rule {rule.name}/{dirn} broke typing"
                        )
                        result = _splice(s, path, start, end, repl)
                        if result.key != s.key:
                            yield rule.name, dirn, (path, start, end), result


def apply_at(s: SeqTerm, rule_name: str, dirn: str, position, kind: Kind) -> SeqTerm | None:
    """Replay a recorded step; None if it no longer applies."""
    for name, d, pos, result in rewrites(s, kind):
        if name == rule_name and d == dirn and pos == position:
            return result
    return None


def schema_bindings(rule: Rule, rng, random_obj, random_term_from) -> dict:
    """Random bindings for a schema: objects for free object variables,
    typed random terms for morphism variables (dependencies respected)."""
    b: dict = {}
    for name, dp, cp in rule.metas:
        if isinstance(dp, OVar) and dp.name in b:
            dom = b[dp.name]
        else:
            dom = random_obj(rng)
            if isinstance(dp, OVar):
                b[dp.name] = dom
            else:
                raise ValueError(f"rule {rule.name}: unsupported domain pattern for {name}")
        term = random_term_from(rng, dom)
        b[name] = term
        from .typecheck import infer_type

        cod = infer_type(term).cod
        if isinstance(cp, OVar):
            if cp.name in b and b[cp.name] != cod:
                raise ValueError(f"rule {rule.name}: codomain clash for {name}")
            b[cp.name] = cod
        else:
            raise ValueError(f"rule {rule.name}: unsupported codomain pattern for {name}")
    for side in (rule.lhs, rule.rhs):
        ovs, _ = _tree_vars(side)
        for ov in sorted(ovs):
            if ov not in b:
                b[ov] = random_obj(rng)
    return b
