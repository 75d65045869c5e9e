"""Free structural category calculi: five graded term languages
(monoidal, symmetric, relevant, affine, cartesian), their occurrence
graphs, a graph-based equality decision, constructive normal forms,
the projection/pairing presentation of the cartesian calculus, and a
bounded equational-rewriting oracle for cross-validation.
"""

from .coherence import (
    Hole, Verdict, conservativity_check, decide_equal, diagram_commutes,
    representative,
)
from .graphs import (
    Graph, classify, compose, graph_of, graph_to_dot, graph_to_json,
    identity, tensor, to_finord,
)
from .normalize import (
    AffNormalForm, ForkTree, RelNormalForm, aff_normal_form,
    factor_w_composition, product_decompose, rel_normal_form,
    split_w_composition,
)
from .cartesian import (
    Pair, Proj1, Proj2, StdComp, StdId, StdTerm, Terminal, atomize,
    distribute, from_std, parse_std_term, print_std_term, std_equal,
    std_graph, std_type, to_std,
)
from .oracle import (
    OracleVerdict, closure_equal, random_diversified_object, random_term,
    replay, run_fuzz,
)
from .syntax import (
    Assoc, AssocInv, Atom, Comp, Copy, Discard, Id, LUnit, LUnitInv, Letter,
    Obj, Prod, RUnit, RUnitInv, Swap, Tensor, Term, Unit, is_diversified,
    letter_occurrences, middle_interchange, parse_obj, parse_term, print_obj,
    print_term,
)
from .typecheck import Kind, MorType, admits, infer_type, kind_leq

__all__ = [
    "Kind", "MorType", "admits", "infer_type", "kind_leq",
    "Letter", "Obj", "Atom", "Unit", "Prod",
    "Term", "Id", "LUnit", "LUnitInv", "RUnit", "RUnitInv",
    "Assoc", "AssocInv", "Swap", "Copy", "Discard", "Comp", "Tensor",
    "parse_obj", "print_obj", "parse_term", "print_term",
    "letter_occurrences", "is_diversified", "middle_interchange",
    "Graph", "identity", "compose", "tensor", "classify", "graph_of",
    "to_finord", "graph_to_json", "graph_to_dot",
    "Verdict", "decide_equal", "diagram_commutes", "Hole", "representative",
    "conservativity_check",
    "product_decompose", "factor_w_composition", "split_w_composition",
    "ForkTree", "RelNormalForm", "rel_normal_form",
    "AffNormalForm", "aff_normal_form",
    "StdTerm", "StdId", "Proj1", "Proj2", "Terminal", "Pair", "StdComp",
    "std_type", "parse_std_term", "print_std_term", "to_std", "from_std",
    "distribute", "atomize", "std_equal", "std_graph",
    "OracleVerdict", "closure_equal", "replay", "random_term",
    "random_diversified_object", "run_fuzz",
]
