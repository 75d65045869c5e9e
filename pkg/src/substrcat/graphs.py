"""The graph calculus.

The graph of a morphism term f: A -> B sends each letter occurrence of B
back to the letter occurrence of A it is traced from.  Occurrences are
numbered 1..n left to right, units skipped.  Unitors and associators are
identities on occurrences, the symmetry is a block swap, copy doubles,
discard forgets.  Graphs compose contravariantly (they are arrows of the
dual of finite ordinals) and tensor by block union.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import SizeMismatch
from .syntax import (
    Assoc, AssocInv, Comp, Copy, Discard, Id, LUnit, LUnitInv, Obj,
    RUnit, RUnitInv, Swap, Tensor, Term, letter_occurrences, occ_count,
)
from .typecheck import Kind, infer_type

__all__ = [
    "Graph", "identity", "compose", "tensor", "classify",
    "graph_of", "to_finord", "graph_to_json", "graph_from_json", "graph_to_dot",
    "letters_consistent",
]


@dataclass(frozen=True)
class Graph:
    """A total map {1..cod_size} -> {1..dom_size}, stored 1-based."""

    dom_size: int
    cod_size: int
    mapping: tuple[int, ...]

    def __post_init__(self):
        if len(self.mapping) != self.cod_size:
            raise ValueError("mapping length must equal cod_size")
        for j in self.mapping:
            if not 1 <= j <= self.dom_size:
                raise ValueError(f"image {j} outside 1..{self.dom_size}")

    def __call__(self, i: int) -> int:
        return self.mapping[i - 1]

    def __str__(self):
        inside = ", ".join(f"{i + 1}->{j}" for i, j in enumerate(self.mapping))
        return f"graph[{self.dom_size}<-{self.cod_size}]{{{inside}}}"


def identity(n: int) -> Graph:
    return Graph(n, n, tuple(range(1, n + 1)))


def compose(g_after: Graph, f_before: Graph) -> Graph:
    """Graph of the composite (g after f): trace through g, then f."""
    if f_before.cod_size != g_after.dom_size:
        raise SizeMismatch(
            f"cannot compose graphs: inner sizes {f_before.cod_size} and {g_after.dom_size} differ"
        )
    return Graph(
        f_before.dom_size,
        g_after.cod_size,
        tuple(f_before.mapping[j - 1] for j in g_after.mapping),
    )


def tensor(f: Graph, g: Graph) -> Graph:
    m, k = f.dom_size, f.cod_size
    return Graph(
        m + g.dom_size,
        k + g.cod_size,
        f.mapping + tuple(m + j for j in g.mapping),
    )


def classify(g: Graph) -> str:
    """Most specific of identity, bijective, surjective, injective, arbitrary."""
    image = set(g.mapping)
    injective = len(image) == g.cod_size
    surjective = len(image) == g.dom_size
    if g.dom_size == g.cod_size and all(j == i + 1 for i, j in enumerate(g.mapping)):
        return "identity"
    if injective and surjective:
        return "bijective"
    if surjective:
        return "surjective"
    if injective:
        return "injective"
    return "arbitrary"


def _graph_rec(t: Term) -> Graph:
    match t:
        case Comp(after=g, before=f):
            return compose(_graph_rec(g), _graph_rec(f))
        case Tensor(left=f, right=g):
            return tensor(_graph_rec(f), _graph_rec(g))
        case Id(a=a) | LUnit(a=a) | LUnitInv(a=a) | RUnit(a=a) | RUnitInv(a=a):
            return identity(occ_count(a))
        case Assoc(a=a, b=b, c=c) | AssocInv(a=a, b=b, c=c):
            return identity(occ_count(a) + occ_count(b) + occ_count(c))
        case Swap(a=a, b=b):
            na, nb = occ_count(a), occ_count(b)
            return Graph(
                na + nb,
                nb + na,
                tuple(range(na + 1, na + nb + 1)) + tuple(range(1, na + 1)),
            )
        case Copy(a=a):
            n = occ_count(a)
            ident = tuple(range(1, n + 1))
            return Graph(n, 2 * n, ident + ident)
        case Discard(a=a):
            return Graph(occ_count(a), 0, ())
    raise TypeError(f"not a morphism term: {t!r}")


def graph_of(t: Term, kind: Kind = Kind.CART) -> Graph:
    """Graph of a well-typed term admitted by ``kind``."""
    infer_type(t, kind)
    return _graph_rec(t)


def to_finord(t: Term, kind: Kind = Kind.CART) -> tuple[int, int, tuple[int, ...]]:
    """Image of ``t`` under the functor into dual finite ordinals."""
    mt = infer_type(t, kind)
    g = _graph_rec(t)
    assert (g.dom_size, g.cod_size) == (occ_count(mt.dom), occ_count(mt.cod))
    return g.dom_size, g.cod_size, g.mapping


def letters_consistent(t: Term, kind: Kind = Kind.CART) -> bool:
    """Each codomain occurrence carries the same letter as its image."""
    mt = infer_type(t, kind)
    g = _graph_rec(t)
    dom_letters = letter_occurrences(mt.dom)
    cod_letters = letter_occurrences(mt.cod)
    return all(cod_letters[i] == dom_letters[j - 1] for i, j in enumerate(g.mapping))


def graph_to_json(g: Graph) -> str:
    return json.dumps({"dom": g.dom_size, "cod": g.cod_size, "map": list(g.mapping)})


def graph_from_json(text: str) -> Graph:
    data = json.loads(text)
    return Graph(data["dom"], data["cod"], tuple(data["map"]))


def graph_to_dot(g: Graph, dom_labels=None, cod_labels=None) -> str:
    """Bipartite linkage diagram: one rank per side, one edge per map entry."""
    dom_labels = list(dom_labels) if dom_labels else [str(i) for i in range(1, g.dom_size + 1)]
    cod_labels = list(cod_labels) if cod_labels else [str(i) for i in range(1, g.cod_size + 1)]
    lines = ["digraph occurrence_linkage {", "  rankdir=TB;", "  node [shape=plaintext];"]
    lines.append("  subgraph cluster_dom { label=\"dom\"; rank=same;")
    for i in range(1, g.dom_size + 1):
        lines.append(f'    d{i} [label="{dom_labels[i - 1]}"];')
    lines.append("  }")
    lines.append("  subgraph cluster_cod { label=\"cod\"; rank=same;")
    for i in range(1, g.cod_size + 1):
        lines.append(f'    c{i} [label="{cod_labels[i - 1]}"];')
    lines.append("  }")
    for i, j in enumerate(g.mapping, start=1):
        lines.append(f"  c{i} -> d{j};")
    lines.append("}")
    return "\n".join(lines)
