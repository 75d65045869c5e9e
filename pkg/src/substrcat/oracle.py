"""Independent ground truth at desk scale.

closure_equal explores the equational closure of two terms by
bidirectional breadth-first search over single-rule rewrites, with
state deduplication on canonical printed forms.  It is a bounded
semi-decision procedure: a meet inside the budget proves equality and
yields a replayable witness; otherwise the budget is reported as
exhausted (with a flag when both closures closed, which at these sizes
amounts to a disproof).

The module also owns the seeded random generators for objects, terms
and schema instances that the property and acceptance suites use.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field as dc_field

from .errors import TypeMismatch
from .rewrite import (
    Rule, SeqTerm, canon, inst_tree, rewrites, rules_for, schema_bindings, uncanon,
)
from .syntax import (
    Assoc, AssocInv, Atom, Comp, Copy, Discard, Id, Letter, LUnit, LUnitInv,
    Obj, Prod, RUnit, RUnitInv, Swap, Tensor, Term, Unit, is_diversified,
    tensor_wrap,
)
from .typecheck import Kind, infer_type

__all__ = [
    "Step", "Witness", "OracleVerdict", "closure_equal", "replay",
    "random_object", "random_diversified_object", "random_term", "random_term_from",
    "random_rewrite", "random_std_term", "schema_instance", "sample_same_type_pairs",
    "FuzzReport", "run_fuzz",
]

_POOL = ("p", "q", "r", "s", "u", "v", "x", "y", "z")


@dataclass(frozen=True)
class Step:
    rule: str
    direction: str  # lr | rl
    position: tuple
    after_key: str


@dataclass(frozen=True)
class Witness:
    """Two replayable halves meeting in the middle."""

    forward: tuple[Step, ...]   # from the left term to the meet
    backward: tuple[Step, ...]  # from the right term to the meet
    meet_key: str

    def __len__(self):
        return len(self.forward) + len(self.backward)

    def rule_names(self) -> set[str]:
        return {s.rule for s in self.forward} | {s.rule for s in self.backward}


@dataclass(frozen=True)
class OracleVerdict:
    status: str  # proved-equal | budget-exhausted
    witness: Witness | None = None
    states_seen: int = 0
    space_closed: bool = False

    @property
    def proved(self) -> bool:
        return self.status == "proved-equal"


def _trace(parents: dict, start_key: str, end_key: str) -> tuple[Step, ...]:
    steps: list[Step] = []
    key = end_key
    while key != start_key:
        prev_key, rule, dirn, pos = parents[key]
        steps.append(Step(rule, dirn, pos, key))
        key = prev_key
    steps.reverse()
    return tuple(steps)


def closure_equal(f: Term, g: Term, kind: Kind,
                  max_depth: int = 12, max_states: int = 200_000) -> OracleVerdict:
    """Bidirectional closure search; proved-equal iff the classes meet in budget."""
    tf = infer_type(f, kind)
    tg = infer_type(g, kind)
    if tf != tg:
        raise TypeMismatch(f"oracle requires equal types, got {tf} and {tg}")
    sf, sg = canon(f), canon(g)
    if sf.key == sg.key:
        return OracleVerdict("proved-equal", Witness((), (), sf.key), states_seen=2)

    sides = [
        {"seen": {sf.key: sf}, "parents": {}, "frontier": [sf], "depth": 0, "root": sf.key},
        {"seen": {sg.key: sg}, "parents": {}, "frontier": [sg], "depth": 0, "root": sg.key},
    ]

    def states() -> int:
        return len(sides[0]["seen"]) + len(sides[1]["seen"])

    def build_verdict(meet_key: str) -> OracleVerdict:
        fw = _trace(sides[0]["parents"], sides[0]["root"], meet_key)
        bw = _trace(sides[1]["parents"], sides[1]["root"], meet_key)
        return OracleVerdict("proved-equal", Witness(fw, bw, meet_key), states_seen=states())

    while True:
        live = [s for s in sides if s["frontier"]]
        if not live:
            return OracleVerdict("budget-exhausted", states_seen=states(), space_closed=True)
        if sides[0]["depth"] + sides[1]["depth"] >= max_depth or states() >= max_states:
            return OracleVerdict("budget-exhausted", states_seen=states())
        side = min(live, key=lambda s: len(s["frontier"]))
        other = sides[1] if side is sides[0] else sides[0]
        new_frontier: list[SeqTerm] = []
        for state in side["frontier"]:
            for rule, dirn, pos, result in rewrites(state, kind):
                key = result.key
                if key in side["seen"]:
                    continue
                side["seen"][key] = result
                side["parents"][key] = (state.key, rule, dirn, pos)
                if key in other["seen"]:
                    side["depth"] += 1
                    return build_verdict(key)
                new_frontier.append(result)
                if states() >= max_states:
                    return OracleVerdict("budget-exhausted", states_seen=states())
        side["frontier"] = new_frontier
        side["depth"] += 1


def replay(f: Term, g: Term, witness: Witness, kind: Kind) -> bool:
    """Re-run a witness: both halves must walk, step by step, to the meet."""
    from .rewrite import apply_at

    def walk(term: Term, steps: tuple[Step, ...]) -> str | None:
        state = canon(term)
        for step in steps:
            nxt = apply_at(state, step.rule, step.direction, step.position, kind)
            if nxt is None or nxt.key != step.after_key:
                return None
            state = nxt
        return state.key

    return walk(f, witness.forward) == witness.meet_key == walk(g, witness.backward)


# ---------------------------------------------------------------------------
# random generators

def _combine(rng: random.Random, leaves: list[Obj]) -> Obj:
    nodes = list(leaves)
    while len(nodes) > 1:
        i = rng.randrange(len(nodes) - 1)
        nodes[i:i + 2] = [Prod(nodes[i], nodes[i + 1])]
    return nodes[0]


def random_object(rng: random.Random, letters=_POOL[:3], max_leaves: int = 3,
                  unit_p: float = 0.25) -> Obj:
    n = rng.randint(1, max_leaves)
    leaves: list[Obj] = [Atom(Letter(rng.choice(letters))) for _ in range(n)]
    while rng.random() < unit_p:
        leaves.insert(rng.randrange(len(leaves) + 1), Unit())
    return _combine(rng, leaves)


def random_diversified_object(num_letters: int, seed: int) -> Obj:
    """Random unit/association structure over ``num_letters`` distinct letters."""
    rng = random.Random(seed)
    names = [_POOL[i] if i < len(_POOL) else f"l{i}" for i in range(num_letters)]
    rng.shuffle(names)
    leaves: list[Obj] = [Atom(Letter(n)) for n in names]
    for _ in range(rng.randint(0 if leaves else 1, 2)):
        leaves.insert(rng.randrange(len(leaves) + 1), Unit())
    obj = _combine(rng, leaves)
    assert is_diversified(obj)
    return obj


def _prim_count(t: Term) -> int:
    if isinstance(t, Comp):
        return _prim_count(t.after) + _prim_count(t.before)
    if isinstance(t, Tensor):
        return _prim_count(t.left) + _prim_count(t.right)
    return 0 if isinstance(t, Id) else 1


def _subobjects(obj: Obj):
    out = []

    def walk(node, path):
        out.append((tuple(path), node))
        if isinstance(node, Prod):
            walk(node.left, path + [("L", node.right)])
            walk(node.right, path + [("R", node.left)])

    walk(obj, [])
    return out


def _candidate_steps(obj: Obj, kind: Kind):
    cands = []
    for path, node in _subobjects(obj):
        cands.append((path, LUnitInv(node)))
        cands.append((path, RUnitInv(node)))
        if kind in (Kind.REL, Kind.CART):
            cands.append((path, Copy(node)))
        if kind in (Kind.AFF, Kind.CART):
            cands.append((path, Discard(node)))
        if isinstance(node, Prod):
            if kind is not Kind.MON:
                cands.append((path, Swap(node.left, node.right)))
            if isinstance(node.left, Unit):
                cands.append((path, LUnit(node.right)))
            if isinstance(node.right, Unit):
                cands.append((path, RUnit(node.left)))
            if isinstance(node.right, Prod):
                cands.append((path, Assoc(node.left, node.right.left, node.right.right)))
            if isinstance(node.left, Prod):
                cands.append((path, AssocInv(node.left.left, node.left.right, node.right)))
    return cands


def random_term_from(rng: random.Random, kind: Kind, dom: Obj, budget: int) -> Term:
    """Random well-typed term with the given domain and at most ``budget`` primitives."""
    term: Term | None = None
    current = dom
    remaining = budget
    while remaining > 0:
        if term is not None and rng.random() < 0.25:
            break
        if isinstance(current, Prod) and remaining >= 2 and rng.random() < 0.3:
            lb = rng.randint(1, remaining - 1)
            step: Term = Tensor(
                random_term_from(rng, kind, current.left, lb),
                random_term_from(rng, kind, current.right, remaining - lb),
            )
        else:
            path, prim = rng.choice(_candidate_steps(current, kind))
            step = tensor_wrap(path, prim)
        used = _prim_count(step)
        if used == 0:
            break
        term = step if term is None else Comp(step, term)
        current = infer_type(step, kind).cod
        remaining -= used
    return term if term is not None else Id(dom)


def random_term(kind: Kind, size: int, seed: int, dom_hint: Obj | None = None) -> Term:
    """Deterministic random well-typed term admitted by ``kind``."""
    rng = random.Random((seed, kind.value, size).__repr__())
    dom = dom_hint if dom_hint is not None else random_object(rng)
    return random_term_from(rng, kind, dom, size)


def random_rewrite(state: SeqTerm, kind: Kind, rng: random.Random) -> SeqTerm | None:
    options = list(rewrites(state, kind))
    if not options:
        return None
    return rng.choice(options)[3]


def random_std_term(rng: random.Random, dom: Obj, budget: int):
    """Random well-typed standard-language term with the given domain."""
    from .cartesian import Pair, Proj1, Proj2, StdComp, StdId, Terminal, std_type

    if budget <= 0:
        return StdId(dom)
    roll = rng.random()
    if roll < 0.3:
        half = budget // 2
        return Pair(random_std_term(rng, dom, half), random_std_term(rng, dom, budget - half - 1))
    if roll < 0.55 and isinstance(dom, Prod):
        step = Proj1(dom.left, dom.right) if rng.random() < 0.5 else Proj2(dom.left, dom.right)
        return StdComp(random_std_term(rng, std_type(step).cod, budget - 1), step)
    if roll < 0.65:
        return Terminal(dom)
    if roll < 0.8:
        return StdId(dom)
    inner = random_std_term(rng, dom, budget // 2)
    return StdComp(random_std_term(rng, std_type(inner).cod, budget // 2), inner)


def schema_instance(rule: Rule, kind: Kind, rng: random.Random,
                    letters=_POOL[:3], obj_leaves: int = 2,
                    term_budget: int = 3) -> tuple[Term, Term]:
    """A random concrete instance (lhs, rhs) of an equation schema."""
    bindings = schema_bindings(
        rule,
        rng,
        random_obj=lambda r: random_object(r, letters, obj_leaves),
        random_term_from=lambda r, dom: random_term_from(r, kind, dom, term_budget),
    )
    return inst_tree(rule.lhs, bindings), inst_tree(rule.rhs, bindings)


# ---------------------------------------------------------------------------
# fuzzing: decider versus oracle

def sample_same_type_pairs(kind: Kind, size: int, count: int, seed: int,
                           letters=_POOL[:3]):
    """Mixed pairs: half produced by random rewriting (hence equal), half
    pooled by type.  Yields (f, g, how) with how in {rewrite, bucket}."""
    rng = random.Random((seed, kind.value, "pairs").__repr__())
    pairs = []
    buckets: dict[tuple[str, str], list[Term]] = {}
    guard = 0
    while len(pairs) < count and guard < 200 * count:
        guard += 1
        if rng.random() < 0.5:
            f = random_term_from(rng, kind, random_object(rng, letters), rng.randint(1, size))
            state = canon(f)
            for _ in range(rng.choice((1, 1, 1, 2, 2, 3))):
                nxt = random_rewrite(state, kind, rng)
                if nxt is None:
                    break
                state = nxt
            pairs.append((f, uncanon(state), "rewrite"))
        else:
            f = random_term_from(rng, kind, random_object(rng, letters), rng.randint(1, min(size, 4)))
            mt = infer_type(f, kind)
            bucket = buckets.setdefault((mt.dom.key, mt.cod.key), [])
            if bucket:
                pairs.append((rng.choice(bucket), f, "bucket"))
            if len(bucket) < 8:
                bucket.append(f)
    return pairs


@dataclass
class FuzzReport:
    kind: Kind
    pairs: int = 0
    decider_equal: int = 0
    decider_not_equal: int = 0
    confirmed: int = 0
    exhausted: int = 0
    probed: int = 0
    contradictions: list = dc_field(default_factory=list)
    elapsed: float = 0.0

    def lines(self) -> list[str]:
        out = [
            f"kind: {self.kind}",
            f"pairs sampled: {self.pairs}",
            f"decider EQUAL: {self.decider_equal}",
            f"decider NOT-EQUAL: {self.decider_not_equal}",
            f"oracle confirmations: {self.confirmed}",
            f"oracle budget exhaustions: {self.exhausted}",
            f"not-equal pairs probed: {self.probed}",
            f"contradictions: {len(self.contradictions)}",
        ]
        out.extend(f"  CONTRADICTION: {c}" for c in self.contradictions)
        out.append(f"elapsed: {self.elapsed:.2f}s")
        return out


def run_fuzz(kind: Kind, size: int = 6, pairs: int = 500, seed: int = 0,
             max_depth: int = 12, max_states: int = 200_000,
             probe_limit: int = 100, probe_depth: int = 3, probe_states: int = 800) -> FuzzReport:
    """Compare the graph decider against the rewriting oracle on random pairs."""
    from .coherence import decide_equal

    started = time.perf_counter()
    report = FuzzReport(kind=kind)
    stages = [s for s in ((4, 2_000), (8, 20_000)) if s[0] < max_depth and s[1] < max_states]
    stages.append((max_depth, max_states))
    for f, g, how in sample_same_type_pairs(kind, size, pairs, seed):
        report.pairs += 1
        verdict = decide_equal(f, g, kind)
        if verdict.equal:
            report.decider_equal += 1
            proved = False
            for depth, states in stages:
                ov = closure_equal(f, g, kind, depth, states)
                if ov.proved:
                    report.confirmed += 1
                    proved = True
                    break
                if ov.space_closed:
                    report.contradictions.append(
                        f"decider EQUAL but closure closed without meeting ({how}): "
                        f"{f.key}  vs  {g.key}"
                    )
                    proved = True  # handled; do not also count as exhausted
                    break
            if not proved:
                report.exhausted += 1
        else:
            report.decider_not_equal += 1
            if verdict.reason == "different-graph" and report.probed < probe_limit:
                report.probed += 1
                ov = closure_equal(f, g, kind, probe_depth, probe_states)
                if ov.proved:
                    report.contradictions.append(
                        f"oracle proved equal but decider said NOT-EQUAL ({how}): "
                        f"{f.key}  vs  {g.key}"
                    )
    report.elapsed = time.perf_counter() - started
    return report
