"""Graph-based equality decision and diagram checking.

For the symmetric, relevant, affine and cartesian free categories, two
well-typed terms of the same type are equal exactly when their graphs
coincide; the monoidal free category is a preorder, so type identity
alone decides there.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ArityMismatch, CompositionGap, EndpointMismatch, KindViolation
from .graphs import Graph, graph_of
from .syntax import Atom, Letter, Obj, Prod, Term, Unit
from .typecheck import Kind, MorType, admits, infer_type, kind_leq

__all__ = [
    "Verdict", "decide_equal", "diagram_commutes",
    "Hole", "hole_count", "fill_shape", "representative",
    "conservativity_check",
]


@dataclass(frozen=True)
class Verdict:
    equal: bool
    reason: str  # same-graph | different-type | different-graph | mon-preorder

    def __str__(self):
        return f"{'EQUAL' if self.equal else 'NOT-EQUAL'} ({self.reason})"


def decide_equal(f: Term, g: Term, kind: Kind) -> Verdict:
    """Decide f = g in the free category of the given kind."""
    tf = infer_type(f, kind)
    tg = infer_type(g, kind)
    if tf != tg:
        return Verdict(False, "different-type")
    if kind is Kind.MON:
        return Verdict(True, "mon-preorder")
    if graph_of(f, kind) == graph_of(g, kind):
        return Verdict(True, "same-graph")
    return Verdict(False, "different-graph")


def _fold_path(path, kind: Kind, which: str) -> MorType:
    if not path:
        raise CompositionGap(f"{which} path is empty")
    mt = infer_type(path[0], kind)
    for step in path[1:]:
        nxt = infer_type(step, kind)
        if nxt.dom != mt.cod:
            raise CompositionGap(
                f"{which} path does not compose: {mt.cod.key} then {nxt.dom.key}"
            )
        mt = MorType(mt.dom, nxt.cod)
    return mt


def diagram_commutes(path1, path2, kind: Kind) -> Verdict:
    """Check a two-path diagram; paths list arrows in application order."""
    from .syntax import compose_list

    t1 = _fold_path(path1, kind, "first")
    t2 = _fold_path(path2, kind, "second")
    if t1 != t2:
        raise EndpointMismatch(
            f"paths do not share endpoints: {t1} versus {t2}"
        )
    f = compose_list(list(reversed(list(path1))))
    g = compose_list(list(reversed(list(path2))))
    return decide_equal(f, g, kind)


@dataclass(frozen=True, eq=False)
class Hole:
    """Argument placeholder in a shape (an object tree over holes and I)."""

    key: str = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "key", "#")

    def __eq__(self, other):
        return isinstance(other, Hole)

    def __hash__(self):
        return hash("#")


def hole_count(shape) -> int:
    if isinstance(shape, Hole):
        return 1
    if isinstance(shape, Prod):
        return hole_count(shape.left) + hole_count(shape.right)
    if isinstance(shape, Unit):
        return 0
    raise ArityMismatch(f"not a shape node: {shape!r}")


def fill_shape(shape, letters) -> Obj:
    """Substitute ``letters`` (left to right) for the holes of ``shape``."""
    letters = list(letters)

    def go(node):
        if isinstance(node, Hole):
            return Atom(letters.pop(0))
        if isinstance(node, Prod):
            left = go(node.left)
            return Prod(left, go(node.right))
        return node

    if hole_count(shape) != len(letters):
        raise ArityMismatch("letter count differs from hole count")
    return go(shape)


def representative(shape_dom, shape_cod, graph: Graph) -> MorType:
    """Type of the representative: fresh letters p1..pm into the domain
    holes, p_{graph(i)} into the codomain holes."""
    m = hole_count(shape_dom)
    n = hole_count(shape_cod)
    if m != graph.dom_size or n != graph.cod_size:
        raise ArityMismatch(
            f"shape holes ({m}, {n}) do not match graph sizes "
            f"({graph.dom_size}, {graph.cod_size})"
        )
    fresh = [Letter(f"p{i}") for i in range(1, m + 1)]
    dom = fill_shape(shape_dom, fresh)
    cod = fill_shape(shape_cod, [fresh[j - 1] for j in graph.mapping])
    return MorType(dom, cod)


def conservativity_check(f: Term, g: Term, lower: Kind, upper: Kind) -> bool:
    """True when the lower- and upper-kind verdicts agree (they always must)."""
    if not kind_leq(lower, upper):
        raise KindViolation(f"{lower} is not below {upper} in the kind order")
    if not (admits(lower, f) and admits(lower, g)):
        raise KindViolation(f"both terms must already be admitted by {lower}")
    return decide_equal(f, g, lower).equal == decide_equal(f, g, upper).equal
