"""Command-line front end.

Exit codes: 0 for success / EQUAL, 1 for NOT-EQUAL or a failed fuzz
run, 2 for parse, typing or kind errors.  Term arguments may be given
inline, as ``@path`` to read a file, or as ``-`` to read stdin.
"""

from __future__ import annotations

import argparse
import sys

from .cartesian import from_std, parse_std_term, print_std_term, to_std
from .coherence import decide_equal, diagram_commutes
from .errors import TermError
from .graphs import graph_of, graph_to_dot, graph_to_json
from .normalize import ForkTree, aff_normal_form, rel_normal_form
from .oracle import run_fuzz
from .syntax import (
    letter_occurrences, parse_obj, parse_term, print_obj, print_term,
)
from .typecheck import Kind, infer_type, parse_kind

_KIND_CHOICES = ("mon", "symon", "rel", "aff", "cart")


def _read_arg(text: str) -> str:
    if text == "-":
        return sys.stdin.read().strip()
    if text.startswith("@"):
        with open(text[1:], encoding="utf-8") as handle:
            return handle.read().strip()
    return text


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="substrcat",
        description="Structural term calculi: graphs, equality, normal forms.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse a term (or object) and echo its canonical form")
    p.add_argument("expr")
    p.add_argument("--obj", action="store_true", help="parse an object instead of a term")

    p = sub.add_parser("type", help="print DOM -> COD of a term")
    p.add_argument("expr")
    p.add_argument("--kind", choices=_KIND_CHOICES, default="cart")

    p = sub.add_parser("graph", help="print the occurrence graph of a term")
    p.add_argument("expr")
    p.add_argument("--kind", choices=_KIND_CHOICES, default="cart")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON output (default)")
    fmt.add_argument("--dot", action="store_true", help="DOT linkage diagram")

    p = sub.add_parser("eq", help="decide equality of two terms")
    p.add_argument("lhs")
    p.add_argument("rhs")
    p.add_argument("--kind", choices=_KIND_CHOICES, required=True)

    p = sub.add_parser("commutes", help="check a two-path diagram; paths are "
                                        "';'-separated terms in application order")
    p.add_argument("path1")
    p.add_argument("path2")
    p.add_argument("--kind", choices=_KIND_CHOICES, required=True)

    p = sub.add_parser("normalize", help="relevant or affine normal form")
    p.add_argument("expr")
    p.add_argument("--kind", choices=("rel", "aff"), required=True)
    p.add_argument("--trace", action="store_true")

    p = sub.add_parser("translate", help="translate between the structural and "
                                         "standard cartesian languages")
    p.add_argument("expr")
    p.add_argument("--to", choices=("std", "structural"), required=True, dest="target")

    p = sub.add_parser("fuzz", help="compare the graph decider against the rewriting oracle")
    p.add_argument("--kind", choices=_KIND_CHOICES, required=True)
    p.add_argument("--size", type=int, default=6)
    p.add_argument("--pairs", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--depth", type=int, default=12)
    p.add_argument("--states", type=int, default=200_000)
    return ap


def _cmd_parse(args) -> int:
    text = _read_arg(args.expr)
    if args.obj:
        print(print_obj(parse_obj(text)))
    else:
        print(print_term(parse_term(text)))
    return 0


def _cmd_type(args) -> int:
    term = parse_term(_read_arg(args.expr))
    print(infer_type(term, parse_kind(args.kind)))
    return 0


def _cmd_graph(args) -> int:
    kind = parse_kind(args.kind)
    term = parse_term(_read_arg(args.expr))
    mt = infer_type(term, kind)
    graph = graph_of(term, kind)
    if args.dot:
        print(graph_to_dot(
            graph,
            [letter.name for letter in letter_occurrences(mt.dom)],
            [letter.name for letter in letter_occurrences(mt.cod)],
        ))
    else:
        print(graph_to_json(graph))
    return 0


def _cmd_eq(args) -> int:
    kind = parse_kind(args.kind)
    lhs = parse_term(_read_arg(args.lhs))
    rhs = parse_term(_read_arg(args.rhs))
    verdict = decide_equal(lhs, rhs, kind)
    print(verdict)
    return 0 if verdict.equal else 1


def _cmd_commutes(args) -> int:
    kind = parse_kind(args.kind)
    path1 = [parse_term(s) for s in _read_arg(args.path1).split(";") if s.strip()]
    path2 = [parse_term(s) for s in _read_arg(args.path2).split(";") if s.strip()]
    verdict = diagram_commutes(path1, path2, kind)
    print(verdict)
    return 0 if verdict.equal else 1


def _print_rel_trace(trace) -> None:
    for entry in trace:
        stage = entry.get("stage", "factorization")
        print(f"-- {stage}")
        if "round" in entry:
            print(f"   round {entry['round']}: measure {entry['measure']}, "
                  f"object {print_obj(entry['object'])}")
        for label in ("factors", "tail", "copies", "discards", "prefix", "fixes"):
            if label in entry:
                for t in entry[label]:
                    print(f"   {label}: {print_term(t)}")


def _cmd_normalize(args) -> int:
    kind = parse_kind(args.kind)
    term = parse_term(_read_arg(args.expr))
    trace: list | None = [] if args.trace else None
    if kind is Kind.REL:
        try:
            tree = ForkTree.of(term)
            print(f"fork tree: leaves {tree.leaf_count}, weight {tree.weight}")
            if args.trace:
                from .normalize import factor_w_composition

                rounds: list = []
                factor_w_composition(term, rounds)
                for entry in rounds:
                    print(f"round {entry['round']}: measure {entry['measure']}, "
                          f"object {print_obj(entry['object'])}")
                    for t in entry["factors"]:
                        print(f"   {print_term(t)}")
        except TermError:
            pass
        nf = rel_normal_form(term, trace)
    else:
        nf = aff_normal_form(term, trace)
    if trace:
        _print_rel_trace(trace)
    print(print_term(nf.term()))
    return 0


def _cmd_translate(args) -> int:
    text = _read_arg(args.expr)
    if args.target == "std":
        print(print_std_term(to_std(parse_term(text))))
    else:
        print(print_term(from_std(parse_std_term(text))))
    return 0


def _cmd_fuzz(args) -> int:
    report = run_fuzz(
        parse_kind(args.kind),
        size=args.size,
        pairs=args.pairs,
        seed=args.seed,
        max_depth=args.depth,
        max_states=args.states,
    )
    for line in report.lines():
        print(line)
    return 1 if report.contradictions else 0


_COMMANDS = {
    "parse": _cmd_parse,
    "type": _cmd_type,
    "graph": _cmd_graph,
    "eq": _cmd_eq,
    "commutes": _cmd_commutes,
    "normalize": _cmd_normalize,
    "translate": _cmd_translate,
    "fuzz": _cmd_fuzz,
}


def run(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except TermError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())
