"""Constructive normal forms for the relevant and affine calculi.

The pipeline works on lists of *product terms*: one determining factor
(a single primitive) wrapped in identity tensors, or a bare identity.
Lists are kept in composition order (first element applied last).

Relevant normal form: decompose into products; atomize every copy;
bubble atomic copies to the first-applied end by naturality; atomize
swaps; eliminate same-letter atomic swaps against the copy part via
the split factorization and the swap-absorption equation; finally
reorder the copy part into an ordered composition of left atomic copy
products, emitting bracket-fixing associator products into the tail.

Affine normal form: the same skeleton with discards instead of copies
and a plain letter-ordering pass at the end.

The copy-composition factorizer is driven by a fork forest: growing a
copy composition is the same thing as growing a binary tree, one fork
per copy, and the weight (sum over forks of right branches on the path
to the root) strictly drops each time a parent fork and its right
child fork are made adjacent and rotated, which is exactly what the
associator-absorption equation does.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ShapeViolation
from .graphs import graph_of
from .syntax import (
    Assoc, AssocInv, Atom, Comp, Copy, Discard, Id, Letter, LUnit, LUnitInv,
    Obj, Prod, RUnit, RUnitInv, Swap, Tensor, Term, Unit, comp_list,
    compose_list, is_diversified, letter_occurrences, occ_count,
    occurrence_path, replace_occurrence, tensor_wrap, wrap_occurrence,
)
from .typecheck import Kind, infer_type

__all__ = [
    "product_parts", "determining_factor", "is_product_term", "product_decompose",
    "is_atomic_copy_product", "is_left_atomic_copy_product",
    "is_atomic_discard_product", "is_atomic_swap_product",
    "is_diversified_swap_product", "contains_copy", "contains_discard",
    "ForkTree", "factor_w_composition", "split_w_composition",
    "RelNormalForm", "rel_normal_form", "AffNormalForm", "aff_normal_form",
]


# ---------------------------------------------------------------------------
# product terms

def _is_identity_term(t: Term) -> bool:
    if isinstance(t, Id):
        return True
    if isinstance(t, Tensor):
        return _is_identity_term(t.left) and _is_identity_term(t.right)
    return False


def _identity_obj(t: Term) -> Obj:
    if isinstance(t, Id):
        return t.a
    return Prod(_identity_obj(t.left), _identity_obj(t.right))


def product_parts(t: Term) -> tuple[list, Term | None]:
    """Split a product term into (wrapper path, determining factor).

    The factor is None for identity products.  Raises ShapeViolation on
    anything else.
    """
    path: list = []
    node = t
    while isinstance(node, Tensor):
        left_id = _is_identity_term(node.left)
        right_id = _is_identity_term(node.right)
        if left_id and right_id:
            return path, None
        if right_id:
            path.append(("L", _identity_obj(node.right)))
            node = node.left
        elif left_id:
            path.append(("R", _identity_obj(node.left)))
            node = node.right
        else:
            raise ShapeViolation(f"not a product term: {t.key}")
    if isinstance(node, Id):
        return path, None
    if isinstance(node, Comp):
        raise ShapeViolation(f"not a product term: {t.key}")
    return path, node


def determining_factor(t: Term) -> Term | None:
    return product_parts(t)[1]


def is_product_term(t: Term) -> bool:
    try:
        product_parts(t)
        return True
    except ShapeViolation:
        return False


def product_decompose(f: Term) -> list[Term]:
    """Rewrite ``f`` as a composition of product terms (left factor first)."""
    mt = infer_type(f)

    def go(t: Term) -> list[Term]:
        if isinstance(t, Comp):
            return go(t.after) + go(t.before)
        if isinstance(t, Tensor):
            lt = infer_type(t.left)
            rt = infer_type(t.right)
            # left factor applied first: f*g = (1*g) . (f*1)
            return [Tensor(Id(lt.cod), y) for y in go(t.right)] + \
                   [Tensor(x, Id(rt.dom)) for x in go(t.left)]
        return [t]

    out = [t for t in go(f) if product_parts(t)[1] is not None]
    return out or [Id(mt.dom)]


def _path_occ_offset(path) -> int:
    """Letter occurrences to the left of a wrapper path's slot."""
    return sum(occ_count(sib) for side, sib in path if side == "R")


def _path_obj(path, leaf: Obj) -> Obj:
    out = leaf
    for side, sib in reversed(list(path)):
        out = Prod(out, sib) if side == "L" else Prod(sib, out)
    return out


def _atomic_info(t: Term, prim_cls) -> tuple[Letter, int, Obj]:
    """(letter, dom occurrence, dom object) of an atomic copy/discard product."""
    path, core = product_parts(t)
    if not isinstance(core, prim_cls) or not isinstance(core.a, Atom):
        raise ShapeViolation(f"not an atomic {prim_cls.__name__.lower()} product: {t.key}")
    letter = core.a.letter
    occ = _path_occ_offset(path) + 1
    return letter, occ, _path_obj(path, core.a)


def is_atomic_copy_product(t: Term) -> bool:
    try:
        _atomic_info(t, Copy)
        return True
    except ShapeViolation:
        return False


def is_left_atomic_copy_product(t: Term) -> bool:
    """Atomic, and no identity occurrence of the same letter left of the copy."""
    try:
        path, core = product_parts(t)
    except ShapeViolation:
        return False
    if not isinstance(core, Copy) or not isinstance(core.a, Atom):
        return False
    letter = core.a.letter
    return all(
        letter not in letter_occurrences(sib)
        for side, sib in path if side == "R"
    )


def is_atomic_discard_product(t: Term) -> bool:
    try:
        _atomic_info(t, Discard)
        return True
    except ShapeViolation:
        return False


def is_atomic_swap_product(t: Term) -> bool:
    try:
        _, core = product_parts(t)
    except ShapeViolation:
        return False
    return isinstance(core, Swap) and \
        isinstance(core.a, (Atom, Unit)) and isinstance(core.b, (Atom, Unit))


def is_diversified_swap_product(t: Term) -> bool:
    if not is_atomic_swap_product(t):
        return False
    _, core = product_parts(t)
    return not (isinstance(core.a, Atom) and core.a == core.b)


def contains_copy(t: Term) -> bool:
    if isinstance(t, Comp):
        return contains_copy(t.after) or contains_copy(t.before)
    if isinstance(t, Tensor):
        return contains_copy(t.left) or contains_copy(t.right)
    return isinstance(t, Copy)


def contains_discard(t: Term) -> bool:
    if isinstance(t, Comp):
        return contains_discard(t.after) or contains_discard(t.before)
    if isinstance(t, Tensor):
        return contains_discard(t.left) or contains_discard(t.right)
    return isinstance(t, Discard)


# ---------------------------------------------------------------------------
# fork forest

class _Forest:
    """Growth record of a composition of atomic copy products."""

    def __init__(self, dom: Obj, positions):
        self.dom = dom
        self.letter: dict[int, Letter] = {}
        self.kids: dict[int, tuple[int, int]] = {}
        self.parent: dict[int, int] = {}
        self.origin: dict[int, int] = {}
        self.unit: set[int] = set()
        self.original: list[int] = []
        self._n = 0
        self.root = self._build(dom)
        leaves = list(self.original)
        self.events: list[int] = []
        for occ, letter in positions:
            if not 1 <= occ <= len(leaves):
                raise ShapeViolation(f"fork position {occ} out of range")
            nid = leaves[occ - 1]
            if self.letter[nid] != letter:
                raise ShapeViolation(
                    f"fork letter {letter} does not match occurrence {occ}"
                )
            a, b = self._fork(nid)
            leaves[occ - 1:occ] = [a, b]
            self.events.append(nid)

    def _new(self) -> int:
        self._n += 1
        return self._n

    def _build(self, obj: Obj) -> int:
        nid = self._new()
        if isinstance(obj, Atom):
            self.letter[nid] = obj.letter
            self.origin[nid] = nid
            self.original.append(nid)
        elif isinstance(obj, Unit):
            self.unit.add(nid)
        else:
            left = self._build(obj.left)
            right = self._build(obj.right)
            self.kids[nid] = (left, right)
            self.parent[left] = nid
            self.parent[right] = nid
        return nid

    def _fork(self, nid: int) -> tuple[int, int]:
        a, b = self._new(), self._new()
        self.letter[a] = self.letter[b] = self.letter[nid]
        self.origin[a] = self.origin[b] = self.origin[nid]
        self.kids[nid] = (a, b)
        self.parent[a] = self.parent[b] = nid
        return a, b

    def subtree_obj(self, nid: int) -> Obj:
        if nid in self.kids:
            left, right = self.kids[nid]
            return Prod(self.subtree_obj(left), self.subtree_obj(right))
        if nid in self.unit:
            return Unit()
        return Atom(self.letter[nid])

    def final_object(self) -> Obj:
        return self.subtree_obj(self.root)

    def final_leaves(self) -> list[int]:
        out: list[int] = []

        def walk(nid: int):
            if nid in self.kids:
                left, right = self.kids[nid]
                walk(left)
                walk(right)
            elif nid not in self.unit:
                out.append(nid)

        walk(self.root)
        return out

    def positions_for(self, events) -> list[tuple[int, Letter]]:
        leaves = list(self.original)
        out = []
        for nid in events:
            idx = leaves.index(nid)
            out.append((idx + 1, self.letter[nid]))
            leaves[idx:idx + 1] = list(self.kids[nid])
        return out

    def cluster_positions(self, origin_id: int) -> list[tuple[int, Letter]]:
        leaves = [origin_id]
        out = []
        for nid in self.events:
            if self.origin[nid] != origin_id:
                continue
            idx = leaves.index(nid)
            out.append((idx + 1, self.letter[nid]))
            leaves[idx:idx + 1] = list(self.kids[nid])
        return out

    def path_to(self, nid: int) -> list[tuple[str, Obj]]:
        out = []
        x = nid
        while x in self.parent:
            p = self.parent[x]
            left, right = self.kids[p]
            if x == left:
                out.append(("L", self.subtree_obj(right)))
            else:
                out.append(("R", self.subtree_obj(left)))
            x = p
        return list(reversed(out))

    def cluster_weight(self, origin_id: int) -> int:
        total = 0
        for nid in self.kids:
            if self.origin.get(nid) != origin_id:
                continue
            k = 0
            x = nid
            while x != origin_id:
                p = self.parent[x]
                if self.kids[p][1] == x:
                    k += 1
                x = p
            total += k
        return total

    def extract_assoc(self, t: int) -> Term:
        """Bracket-fixing product for the rotation at the hot pair (t, t+1)."""
        nu = self.events[t]
        li, ri = self.kids[nu]
        assert self.events[t + 1] == ri, "not a hot pair"
        ril, rir = self.kids[ri]
        inner = AssocInv(self.subtree_obj(li), self.subtree_obj(ril), self.subtree_obj(rir))
        return tensor_wrap(self.path_to(nu), inner)

    def rotate(self, t: int) -> None:
        nu = self.events[t]
        li, ri = self.kids[nu]
        assert self.events[t + 1] == ri, "not a hot pair"
        ril, rir = self.kids[ri]
        mid = self._new()
        self.letter[mid] = self.letter[nu]
        self.origin[mid] = self.origin[nu]
        self.kids[mid] = (li, ril)
        self.parent[li] = self.parent[ril] = mid
        self.kids[nu] = (mid, rir)
        self.parent[mid] = self.parent[rir] = nu
        del self.kids[ri]
        self.events[t + 1] = mid


def _parse_copy_composition(factors) -> tuple[Obj, list[tuple[int, Letter]]]:
    """Positions (application order) of a composition of atomic copy products."""
    start: Obj | None = None
    current: Obj | None = None
    positions = []
    for t in reversed(list(factors)):
        if product_parts(t)[1] is None:
            continue
        letter, occ, dom = _atomic_info(t, Copy)
        if current is None:
            start = current = dom
        elif dom != current:
            raise ShapeViolation(
                f"factors do not chain: expected domain {current.key}, got {dom.key}"
            )
        positions.append((occ, letter))
        current = replace_occurrence(current, occ, Prod(Atom(letter), Atom(letter)))
    if start is None:
        raise ShapeViolation("empty copy composition")
    return start, positions


def _copy_factors(dom: Obj, positions) -> list[Term]:
    """Regenerate wrapped copy products (composition order) from positions."""
    cur = dom
    out = []
    for occ, letter in positions:
        out.append(wrap_occurrence(cur, occ, Copy(Atom(letter))))
        cur = replace_occurrence(cur, occ, Prod(Atom(letter), Atom(letter)))
    return list(reversed(out))


@dataclass(frozen=True)
class ForkTree:
    """Fork tree of a copy composition; weight is the rotation measure."""

    dom: Obj
    cod: Obj
    leaf_count: int
    weight: int

    @classmethod
    def of(cls, f: Term) -> "ForkTree":
        dom, positions = _parse_copy_composition(comp_list(f))
        forest = _Forest(dom, positions)
        weight = sum(forest.cluster_weight(o) for o in forest.original)
        return cls(dom, forest.final_object(), len(forest.final_leaves()), weight)


def factor_w_composition(f: Term, trace: list | None = None) -> tuple[list[Term], list[Term]]:
    """Factor a copy composition from a single letter as (associator part,
    left atomic copy part); the measure strictly drops each rotation round."""
    dom, positions = _parse_copy_composition(comp_list(f))
    if not isinstance(dom, Atom):
        raise ShapeViolation(f"domain must be a single letter, got {dom.key}")
    forest = _Forest(dom, positions)
    root_origin = forest.original[0]
    b_part: list[Term] = []
    rounds = 0
    while True:
        n = forest.cluster_weight(root_origin)
        if trace is not None:
            trace.append({
                "round": rounds,
                "measure": n,
                "object": forest.final_object(),
                "factors": _copy_factors(dom, forest.positions_for(forest.events)),
            })
        if n == 0:
            break
        pos_now = forest.positions_for(forest.events)
        hot = next(
            (t for t in range(len(pos_now) - 1) if pos_now[t + 1][0] == pos_now[t][0] + 1),
            None,
        )
        if hot is None:
            candidates = []
            for idx, nid in enumerate(forest.events):
                par = forest.parent.get(nid)
                if par is not None and par in forest.kids and forest.kids[par][1] == nid:
                    if par in forest.events:
                        candidates.append((forest.events.index(par), idx))
            parent_idx, idx = min(candidates)
            moved = forest.events.pop(idx)
            forest.events.insert(parent_idx + 1, moved)
            continue
        b_part.append(forest.extract_assoc(hot))
        forest.rotate(hot)
        rounds += 1
    w_positions = forest.positions_for(forest.events)
    assert all(occ == 1 for occ, _ in w_positions)
    return b_part, _copy_factors(dom, w_positions)


def _invert_structural(t: Term) -> Term:
    path, core = product_parts(t)
    match core:
        case Assoc(a=a, b=b, c=c):
            inv: Term = AssocInv(a, b, c)
        case AssocInv(a=a, b=b, c=c):
            inv = Assoc(a, b, c)
        case Swap(a=a, b=b):
            inv = Swap(b, a)
        case LUnit(a=a):
            inv = LUnitInv(a)
        case LUnitInv(a=a):
            inv = LUnit(a)
        case RUnit(a=a):
            inv = RUnitInv(a)
        case RUnitInv(a=a):
            inv = RUnit(a)
        case None:
            return t
        case _:
            raise ShapeViolation(f"factor {core.key} has no structural inverse")
    return tensor_wrap(path, inv)


def _power(letter: Letter, n: int) -> Obj:
    obj: Obj = Atom(letter)
    for _ in range(n - 1):
        obj = Prod(obj, Atom(letter))
    return obj


def _grow_positions(shape: Obj, base: int, letter: Letter) -> list[tuple[int, Letter]]:
    """Fork events growing ``shape`` from one leaf, depth first, left first."""
    if not isinstance(shape, Prod):
        return []
    out = [(base, letter)]
    out += _grow_positions(shape.left, base, letter)
    out += _grow_positions(shape.right, base + occ_count(shape.left), letter)
    return out


def split_w_composition(f: Term, i: int, k: int | None = None) -> tuple[list[Term], Term, list[Term]]:
    """Refactor a copy composition through a fork of the i-th of k leaves.

    Returns (v, mid, u) with f equal to v . mid . u, where u is a copy
    composition growing the two left-associated blocks of sizes i and
    k-i-1, mid forks the last leaf of the left block, and v is a
    composition of associator products.
    """
    dom, positions = _parse_copy_composition(comp_list(f))
    if not isinstance(dom, Atom):
        raise ShapeViolation(f"domain must be a single letter, got {dom.key}")
    leaves = len(positions) + 1
    if k is None:
        k = leaves
    elif k != leaves:
        raise ShapeViolation(f"stated leaf count {k} differs from actual {leaves}")
    if not 1 <= i <= k - 1:
        raise IndexError(f"fork index {i} out of range 1..{k - 1}")
    letter = dom.letter
    mid_core: Term = Copy(Atom(letter)) if i == 1 else \
        Tensor(Id(_power(letter, i - 1)), Copy(Atom(letter)))
    if k - i - 1 >= 1:
        mid: Term = Tensor(mid_core, Id(_power(letter, k - i - 1)))
        target: Obj = Prod(_power(letter, i), _power(letter, k - i - 1))
    else:
        mid = mid_core
        target = _power(letter, i)
    u = _copy_factors(dom, _grow_positions(target, 1, letter))
    h1, comb1 = factor_w_composition(f)
    through = compose_list([mid] + u, fallback_obj=dom)
    h2, comb2 = factor_w_composition(through)
    assert [t.key for t in comb1] == [t.key for t in comb2], "left combs must agree"
    v = h1 + [_invert_structural(t) for t in reversed(h2)]
    return v, mid, u


# ---------------------------------------------------------------------------
# naturality pushes

def _replace_cod_occ(t: Term, i: int, repl: Obj) -> Term:
    """Rebuild a non-copy, non-discard product with one linked occurrence
    replaced consistently in domain and codomain."""
    if isinstance(t, Tensor):
        lc = occ_count(infer_type(t.left).cod)
        if i <= lc:
            return Tensor(_replace_cod_occ(t.left, i, repl), t.right)
        return Tensor(t.left, _replace_cod_occ(t.right, i - lc, repl))
    match t:
        case Id(a=a):
            return Id(replace_occurrence(a, i, repl))
        case LUnit(a=a):
            return LUnit(replace_occurrence(a, i, repl))
        case LUnitInv(a=a):
            return LUnitInv(replace_occurrence(a, i, repl))
        case RUnit(a=a):
            return RUnit(replace_occurrence(a, i, repl))
        case RUnitInv(a=a):
            return RUnitInv(replace_occurrence(a, i, repl))
        case Assoc(a=a, b=b, c=c) | AssocInv(a=a, b=b, c=c):
            cls = type(t)
            ga, gb = occ_count(a), occ_count(b)
            if i <= ga:
                return cls(replace_occurrence(a, i, repl), b, c)
            if i <= ga + gb:
                return cls(a, replace_occurrence(b, i - ga, repl), c)
            return cls(a, b, replace_occurrence(c, i - ga - gb, repl))
        case Swap(a=a, b=b):
            gb = occ_count(b)
            if i <= gb:
                return Swap(a, replace_occurrence(b, i, repl))
            return Swap(replace_occurrence(a, i - gb, repl), b)
    raise ShapeViolation(f"cannot push through {t.key}")


def _push_right(products, is_target, prim_cls, repl_of, kind: Kind):
    """Bubble target products to the first-applied end by naturality."""
    items = list(products)
    changed = True
    while changed:
        changed = False
        for idx in range(len(items) - 2, -1, -1):
            x, y = items[idx], items[idx + 1]
            if not is_target(x) or is_target(y):
                continue
            letter, occ, _ = _atomic_info(x, prim_cls)
            j = graph_of(y, kind)(occ)
            y_dom = infer_type(y, kind).dom
            items[idx] = _replace_cod_occ(y, occ, repl_of(letter))
            items[idx + 1] = wrap_occurrence(y_dom, j, prim_cls(Atom(letter)))
            changed = True
    split = len(items)
    while split > 0 and is_target(items[split - 1]):
        split -= 1
    tail, moved = items[:split], items[split:]
    assert not any(is_target(t) for t in tail)
    return tail, moved


# ---------------------------------------------------------------------------
# relevant normal form

def _atomize_copies(products) -> list[Term]:
    items = list(products)
    idx = 0
    while idx < len(items):
        path, core = product_parts(items[idx])
        if not isinstance(core, Copy) or isinstance(core.a, Atom):
            idx += 1
            continue
        x = core.a
        if isinstance(x, Unit):
            items[idx:idx + 1] = [tensor_wrap(path, LUnitInv(Unit()))]
            continue
        a, b = x.left, x.right
        bb = Prod(b, b)
        interchange_inv = [
            Assoc(a, b, Prod(a, b)),
            Tensor(Id(a), AssocInv(b, a, b)),
            Tensor(Id(a), Tensor(Swap(a, b), Id(b))),
            Tensor(Id(a), Assoc(a, b, b)),
            AssocInv(a, a, bb),
        ]
        repl = interchange_inv + [Tensor(Id(Prod(a, a)), Copy(b)), Tensor(Copy(a), Id(b))]
        items[idx:idx + 1] = [tensor_wrap(path, t) for t in repl]
    return items


def _atomic_swap_expansion(a: Obj, b: Obj) -> list[Term]:
    if isinstance(a, (Atom, Unit)) and isinstance(b, (Atom, Unit)):
        return [Swap(a, b)]
    if isinstance(a, Prod):
        a1, a2 = a.left, a.right
        out: list[Term] = [AssocInv(b, a1, a2)]
        out += [Tensor(t, Id(a2)) for t in _atomic_swap_expansion(a1, b)]
        out += [Assoc(a1, b, a2)]
        out += [Tensor(Id(a1), t) for t in _atomic_swap_expansion(a2, b)]
        out += [AssocInv(a1, a2, b)]
        return out
    return [_invert_structural(t) for t in reversed(_atomic_swap_expansion(b, a))]


def _atomize_swaps(products) -> list[Term]:
    items = list(products)
    idx = 0
    while idx < len(items):
        path, core = product_parts(items[idx])
        if isinstance(core, Swap) and not (
            isinstance(core.a, (Atom, Unit)) and isinstance(core.b, (Atom, Unit))
        ):
            repl = _atomic_swap_expansion(core.a, core.b)
            items[idx:idx + 1] = [tensor_wrap(path, t) for t in repl]
        else:
            idx += 1
    return items


def _is_dup_swap(t: Term) -> bool:
    try:
        _, core = product_parts(t)
    except ShapeViolation:
        return False
    return isinstance(core, Swap) and isinstance(core.a, Atom) and core.a == core.b


def _eliminate_dup_swaps(tail, copies, dom: Obj, trace: list | None):
    tail = list(tail)
    copies = list(copies)
    while True:
        ridx = next(
            (i for i in range(len(tail) - 1, -1, -1) if _is_dup_swap(tail[i])),
            None,
        )
        if ridx is None:
            return tail, copies
        t2, swap_prod, t1 = tail[:ridx], tail[ridx], tail[ridx + 1:]
        swap_path, core = product_parts(swap_prod)
        letter = core.a.letter
        d = _path_occ_offset(swap_path) + 1
        if t1:
            g = graph_of(compose_list(t1), Kind.REL)
            j1, j2 = g(d), g(d + 1)
        else:
            j1, j2 = d, d + 1
        assert j2 == j1 + 1, "swapped occurrences must be consecutive"

        positions = _parse_copy_composition(copies)[1]
        forest = _Forest(dom, positions)
        origin = next(o for o in forest.original if forest.letter[o] == letter)
        p_events = [n for n in forest.events if forest.origin[n] == origin]
        rest_events = [n for n in forest.events if forest.origin[n] != origin]
        reordered = rest_events + p_events
        factors2 = _copy_factors(dom, forest.positions_for(reordered))
        w_rest = factors2[len(p_events):]

        final_leaves = forest.final_leaves()
        base = next(ix for ix, nid in enumerate(final_leaves) if forest.origin[nid] == origin)
        k = sum(1 for nid in final_leaves if forest.origin[nid] == origin)
        i = j1 - base
        assert 1 <= i <= k - 1 and j2 - base == i + 1, "swap must target the copy block"

        core_positions = forest.cluster_positions(origin)
        core_term = compose_list(_copy_factors(Atom(letter), core_positions), Atom(letter))
        v, mid, u = split_w_composition(core_term, i)
        wpath = forest.path_to(origin)
        fixups = [tensor_wrap(wpath, t) for t in v]
        mid_wrapped = tensor_wrap(wpath, mid)
        u_wrapped = [tensor_wrap(wpath, t) for t in u]

        mid_path, _ = product_parts(mid)
        dup_here = tensor_wrap(wpath, tensor_wrap(mid_path, Swap(Atom(letter), Atom(letter))))
        lhs = compose_list([swap_prod] + t1 + fixups)
        rhs = compose_list(t1 + fixups + [dup_here])
        assert graph_of(lhs, Kind.REL) == graph_of(rhs, Kind.REL), \
            "swap transport must preserve the graph"

        tail = t2 + t1 + fixups
        copies = [mid_wrapped] + u_wrapped + w_rest
        if trace is not None:
            trace.append({
                "stage": "swap-elimination",
                "letter": str(letter),
                "tail": list(tail),
                "copies": list(copies),
            })


def _block_path(obj: Obj, letter: Letter) -> tuple[list, Obj]:
    """Path to the minimal subobject holding every occurrence of ``letter``."""
    path: list = []
    node = obj
    while isinstance(node, Prod):
        in_left = letter in letter_occurrences(node.left)
        in_right = letter in letter_occurrences(node.right)
        if in_left and in_right:
            break
        if in_left:
            path.append(("L", node.right))
            node = node.left
        else:
            path.append(("R", node.left))
            node = node.right
    return path, node


def _replace_subobject(obj: Obj, path, new: Obj) -> Obj:
    if not path:
        return new
    side, _ = path[0]
    if side == "L":
        return Prod(_replace_subobject(obj.left, path[1:], new), obj.right)
    return Prod(obj.left, _replace_subobject(obj.right, path[1:], new))


def _order_copy_prefix(dom: Obj, copies, trace: list | None):
    """Left comb per letter, ascending letters, fixing brackets in the tail."""
    if not copies:
        return [], []
    positions = _parse_copy_composition(copies)[1]
    forest = _Forest(dom, positions)
    by_letter = {}
    for nid in forest.events:
        origin = forest.origin[nid]
        by_letter.setdefault(forest.letter[origin], origin)
    prefix: list[Term] = []
    fix_info = []
    cur = dom
    for letter in sorted(by_letter):
        origin = by_letter[letter]
        rel_positions = forest.cluster_positions(origin)
        core = compose_list(_copy_factors(Atom(letter), rel_positions), Atom(letter))
        b_core, comb = factor_w_composition(core)
        occs = letter_occurrences(cur)
        occ = occs.index(letter) + 1
        path = occurrence_path(cur, occ)
        prefix = [tensor_wrap(path, t) for t in comb] + prefix
        cur = replace_occurrence(cur, occ, _power(letter, len(rel_positions) + 1))
        fix_info.append((letter, b_core, forest.subtree_obj(origin)))
    fixes: list[Term] = []
    for letter, b_core, final_shape in fix_info:
        if not b_core:
            continue
        path, block = _block_path(cur, letter)
        fixes = [tensor_wrap(path, t) for t in b_core] + fixes
        cur = _replace_subobject(cur, path, final_shape)
    if trace is not None:
        trace.append({"stage": "copy-ordering", "prefix": list(prefix), "fixes": list(fixes)})
    return prefix, fixes


@dataclass(frozen=True)
class RelNormalForm:
    """Ordered left atomic copy prefix plus a copy-free tail with
    diversified atomic swaps only."""

    prefix: tuple[Term, ...]
    tail: tuple[Term, ...]
    dom: Obj
    cod: Obj

    def term(self) -> Term:
        return compose_list(list(self.tail) + list(self.prefix), fallback_obj=self.dom)

    def check(self) -> bool:
        if not all(is_left_atomic_copy_product(t) for t in self.prefix):
            return False
        letters = [_atomic_info(t, Copy)[0] for t in self.prefix]
        if any(a < b for a, b in zip(letters, letters[1:])):
            return False
        for t in self.tail:
            if contains_copy(t):
                return False
            _, core = product_parts(t)
            if isinstance(core, Swap) and not is_diversified_swap_product(t):
                return False
        return True


def rel_normal_form(f: Term, trace: list | None = None) -> RelNormalForm:
    """Normal form in the relevant calculus for diversified domains."""
    mt = infer_type(f, Kind.REL)
    if not is_diversified(mt.dom):
        raise ShapeViolation(f"domain {mt.dom.key} is not diversified")
    products = product_decompose(f)
    if trace is not None:
        trace.append({"stage": "products", "factors": list(products)})
    products = _atomize_copies(products)
    if trace is not None:
        trace.append({"stage": "copies-atomized", "factors": list(products)})
    tail, copies = _push_right(
        products, is_atomic_copy_product, Copy,
        lambda letter: Prod(Atom(letter), Atom(letter)), Kind.REL,
    )
    if trace is not None:
        trace.append({"stage": "copies-pushed", "tail": list(tail), "copies": list(copies)})
    tail = _atomize_swaps(tail)
    if trace is not None:
        trace.append({"stage": "swaps-atomized", "tail": list(tail)})
    tail, copies = _eliminate_dup_swaps(tail, copies, mt.dom, trace)
    prefix, fixes = _order_copy_prefix(mt.dom, copies, trace)
    tail = [t for t in tail + fixes if product_parts(t)[1] is not None]
    if not tail and not prefix:
        tail = [Id(mt.dom)]
    nf = RelNormalForm(tuple(prefix), tuple(tail), mt.dom, mt.cod)
    assert infer_type(nf.term(), Kind.REL) == mt
    assert graph_of(nf.term(), Kind.REL) == graph_of(f, Kind.REL)
    assert nf.check()
    return nf


# ---------------------------------------------------------------------------
# affine normal form

def _atomize_discards(products) -> list[Term]:
    items = list(products)
    idx = 0
    while idx < len(items):
        path, core = product_parts(items[idx])
        if not isinstance(core, Discard) or isinstance(core.a, Atom):
            idx += 1
            continue
        x = core.a
        if isinstance(x, Unit):
            items[idx:idx + 1] = []
            continue
        a, b = x.left, x.right
        repl = [
            LUnit(Unit()),
            Tensor(Id(Unit()), Discard(b)),
            Tensor(Discard(a), Id(b)),
        ]
        items[idx:idx + 1] = [tensor_wrap(path, t) for t in repl]
    return items


def _order_discard_prefix(dom: Obj, discards) -> list[Term]:
    if not discards:
        return []
    events = []
    cur = dom
    alive = list(range(1, occ_count(dom) + 1))
    for t in reversed(list(discards)):
        letter, occ, fdom = _atomic_info(t, Discard)
        if fdom != cur:
            raise ShapeViolation(
                f"discard factors do not chain: expected {cur.key}, got {fdom.key}"
            )
        events.append((letter, alive[occ - 1]))
        del alive[occ - 1]
        cur = replace_occurrence(cur, occ, Unit())
    out = []
    cur = dom
    alive = list(range(1, occ_count(dom) + 1))
    for letter, orig in sorted(events):
        occ = alive.index(orig) + 1
        out.append(wrap_occurrence(cur, occ, Discard(Atom(letter))))
        del alive[occ - 1]
        cur = replace_occurrence(cur, occ, Unit())
    return list(reversed(out))


@dataclass(frozen=True)
class AffNormalForm:
    """Ordered atomic discard prefix plus a discard-free tail."""

    prefix: tuple[Term, ...]
    tail: tuple[Term, ...]
    dom: Obj
    cod: Obj

    def term(self) -> Term:
        return compose_list(list(self.tail) + list(self.prefix), fallback_obj=self.dom)

    def check(self) -> bool:
        if not all(is_atomic_discard_product(t) for t in self.prefix):
            return False
        letters = [_atomic_info(t, Discard)[0] for t in self.prefix]
        if any(a < b for a, b in zip(letters, letters[1:])):
            return False
        return not any(contains_discard(t) for t in self.tail)


def aff_normal_form(f: Term, trace: list | None = None) -> AffNormalForm:
    """Normal form in the affine calculus."""
    mt = infer_type(f, Kind.AFF)
    products = product_decompose(f)
    if trace is not None:
        trace.append({"stage": "products", "factors": list(products)})
    products = _atomize_discards(products)
    if not products:
        products = [Id(mt.dom)]
    if trace is not None:
        trace.append({"stage": "discards-atomized", "factors": list(products)})
    tail, discards = _push_right(
        products, is_atomic_discard_product, Discard, lambda letter: Unit(), Kind.AFF,
    )
    if trace is not None:
        trace.append({"stage": "discards-pushed", "tail": list(tail), "discards": list(discards)})
    prefix = _order_discard_prefix(mt.dom, discards)
    tail = [t for t in tail if product_parts(t)[1] is not None]
    if not tail and not prefix:
        tail = [Id(mt.dom)]
    nf = AffNormalForm(tuple(prefix), tuple(tail), mt.dom, mt.cod)
    assert infer_type(nf.term(), Kind.AFF) == mt
    assert graph_of(nf.term(), Kind.AFF) == graph_of(f, Kind.AFF)
    assert nf.check()
    return nf
