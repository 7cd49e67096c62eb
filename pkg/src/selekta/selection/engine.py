"""Evaluation program, rule priorities and source selection for one query."""
import hashlib
from collections import defaultdict
from dataclasses import dataclass, field

from ..errors import HeadlessRule, NoSelectionInput
from ..logic.grounding import ground_program, ground_with_origins
from ..logic.parser import parse_program
from ..logic.solver import answer_sets
from ..logic.terms import Literal, Program, Rule, Variable, facts_program
from ..optimizer import optimal_among, weight_vector, max_level
from ..preference import (check_strict_partial_order, ground_user_order, preferred_listing,
                          transitive_closure)
from .base import DEFAULT_PREDICATES, QUERY_SOURCE, SelectionBase

_S, _Q = Variable("S"), Variable("Q")

# -query_source(S,Q) <- query_source(S2,Q), S != S2, where S ranges over
# the possible query_source atoms
STRUCTURAL = parse_program(
    "@structural(S,S2,Q) -query_source(S,Q) :- query_source(S2,Q), S != S2.").rules[0]
STRUCTURAL = Rule(STRUCTURAL.head, STRUCTURAL.pos, (), STRUCTURAL.builtins, (), STRUCTURAL.label,
                  (Literal("query_source", (_S, _Q)),))

DEFAULT_CLASS, DEFAULT_PATH = parse_program("""
@default_class(O,C,P,Q) default_class(O,C,Q) :- access(O,C,P,Q).
@default_path(O,C,P,Q) default_path(O,P,Q) :- access(O,C,P,Q).
""").rules


def defaultize(r: Rule) -> Rule:
    """Make a rule defeasible: add ``not -head`` to its body."""
    if r.head is None:
        raise HeadlessRule(f"cannot defaultize a constraint: {r}")
    return Rule(r.head, r.pos, r.neg + (r.head.complement(),), r.builtins, r.aggregates,
                r.label, r.domain)


def multi_source_rules(k: int):
    """Rules allowing up to k sources per query, replacing STRUCTURAL."""
    if k < 1:
        raise ValueError("k must be at least 1")
    return parse_program(f"""
@k_guard(Q,K) false :- not false, query(Q), max_sources(K), #count{{S1: query_source(S1,Q)}} > K.
@k_close(S,Q,K) -query_source(S,Q) :- source(S), query(Q), max_sources(K),
    1 <= #count{{S1: query_source(S1,Q)}} <= K, not query_source(S,Q).
max_sources({k}).
""").rules


@dataclass(frozen=True)
class SelectionInput:
    y: frozenset
    y_def: frozenset


def _with_defaults(y):
    extra = set()
    for l in y:
        if l.predicate == "access" and len(l.args) == 4 and not l.negated:
            o, c, p, q = l.args
            extra.add(Literal("default_class", (o, c, q)))
            extra.add(Literal("default_path", (o, p, q)))
    return frozenset(y) | extra


def _facts_of(rq):
    return getattr(rq, "facts", rq)


def selection_inputs(base: SelectionBase, rq):
    """All answer sets of qa + R(Q) + sd + dom, with their default extensions."""
    prog = base.context_program() + facts_program(_facts_of(rq))
    found = answer_sets(prog)
    if not found:
        raise NoSelectionInput("query description, sources and domain have no answer set")
    return [SelectionInput(x.literals, _with_defaults(x.literals)) for x in found]


@dataclass
class EvaluationProgram:
    rules: tuple
    weak: tuple
    kinds: dict          # ground rule -> core / aux / structural / default / multi
    originals: dict      # defaultized core instance -> the instance before defaultization
    inputs: list
    names: dict = field(default_factory=dict)

    def program(self) -> Program:
        return Program(self.rules, self.weak)

    def of_kind(self, kind):
        return [r for r in self.rules if self.kinds.get(r) == kind]


def build_evaluation_program(base: SelectionBase, rq, inputs=None, max_sources=None):
    if inputs is None:
        inputs = selection_inputs(base, rq)
    parts = []  # (rule, kind)
    for r in base.core:
        parts.append((defaultize(r), "core"))
    for r in base.aux:
        parts.append((r, "aux"))
    if max_sources is None:
        parts.append((STRUCTURAL, "structural"))
    else:
        parts.extend((r, "multi") for r in multi_source_rules(max_sources))
    parts.append((DEFAULT_CLASS, "default"))
    parts.append((DEFAULT_PATH, "default"))
    union = set()
    for y in inputs:
        union |= y.y
    # Y itself is not part of the evaluation program; it only supplies bindings
    src = Program(tuple(r for r, _ in parts), base.weak) + facts_program(union)
    ground, origins = ground_with_origins(src)
    rules, kinds, originals = [], {}, {}
    for inst, idx in zip(ground.rules, origins):
        if idx >= len(parts):
            continue
        kind = parts[idx][1]
        rules.append(inst)
        kinds[inst] = kind
        if kind == "core":
            comp = inst.head.complement()
            originals[inst] = Rule(inst.head, inst.pos, tuple(l for l in inst.neg if l != comp),
                                   (), inst.aggregates, inst.label)
    rules = tuple(rules)
    return EvaluationProgram(rules, ground.weak, kinds, originals, list(inputs), rule_names(rules))


def rule_names(rules):
    """Stable printable name per ground rule: its label, else a digest of its text."""
    names = {}
    used = defaultdict(list)
    for r in rules:
        if r.label is not None:
            n = str(r.label)
        else:
            n = "rule_" + hashlib.sha1(str(r).encode()).hexdigest()[:8]
        used[n].append(r)
    for n, rs in used.items():
        if len(rs) == 1:
            names[rs[0]] = n
        else:
            for r in rs:
                names[r] = n + "#" + hashlib.sha1(str(r).encode()).hexdigest()[:6]
    return names


def dagger(r: Rule, vocab):
    """Body literals over query, source, domain and default predicates."""
    pos = tuple(l for l in r.pos if vocab.in_dagger(l.signature))
    neg = tuple(l for l in r.neg if vocab.in_dagger(l.signature))
    return pos, neg


def relevant_rules(base: SelectionBase, pq: EvaluationProgram, inputs=None):
    inputs = pq.inputs if inputs is None else inputs
    out = set()
    for r in pq.rules:
        pos, neg = dagger(r, base.vocab)
        for y in inputs:
            if all(l in y.y_def for l in pos) and not any(l in y.y_def for l in neg):
                out.add(r)
                break
    return frozenset(out)


def _contexts(r: Rule):
    acc, dc, dp = [], set(), set()
    for l in r.pos:
        if l.negated:
            continue
        if l.predicate == "access" and len(l.args) == 4:
            acc.append(l.args)
        elif l.predicate == "default_class" and len(l.args) == 3:
            dc.add(l.args[2])
        elif l.predicate == "default_path" and len(l.args) == 3:
            dp.add(l.args[2])
    return acc, dc, dp


def context_order(relevant, inputs):
    """Specificity pairs (r1, r2), r2 being the more specific rule."""
    subpaths = set()
    for y in inputs:
        for l in y.y:
            if l.predicate == "subpath" and len(l.args) == 5 and not l.negated:
                subpaths.add(l.args)
    info = {}
    for r in relevant:
        acc, dc, dp = _contexts(r)
        if acc or dc or dp:
            info[r] = (acc, dc, dp, {a[3] for a in acc})
    pairs = set()
    for r1, (acc1, dc1, dp1, _) in info.items():
        for r2, (acc2, dc2, dp2, accq2) in info.items():
            if r1 == r2:
                continue
            if dp1 & (accq2 | dc2) or dc1 & accq2:  # O1, O2
                pairs.add((r1, r2))
                continue
            for o, t1, p1, q in acc1:  # O3
                if any(o2 == o and q2 == q and (o, t1, p1, t2, p2) in subpaths
                       for o2, t2, p2, q2 in acc2):
                    pairs.add((r1, r2))
                    break
    return frozenset(pairs)


def combine_orders(user, ctx):
    """Returns (joined, acyclic part, final order)."""
    joined = frozenset(user) | frozenset(ctx)
    star = transitive_closure(joined)
    kept = frozenset((a, b) for a, b in joined if (b, a) not in star)
    return joined, kept, transitive_closure(kept)


def user_order(base: SelectionBase, pq: EvaluationProgram, relevant):
    declared = defaultdict(set)
    for r in base.core:
        if r.label is not None:
            declared[r.label.name].add(len(r.label.args))
    full = ground_user_order(base.prefs, pq.of_kind("core"), declared)
    return frozenset((a, b) for a, b in full if a in relevant and b in relevant)


def selection_predicates(base: SelectionBase):
    return {QUERY_SOURCE} | set(base.vocab.aux) | set(DEFAULT_PREDICATES)


@dataclass
class Candidate:
    answer_set: object
    weights: tuple
    input_index: int

    def selected(self):
        return sorted((l for l in self.answer_set.literals
                       if l.signature == QUERY_SOURCE and not l.negated),
                      key=lambda l: l.sort_key())


@dataclass
class SelectionReport:
    inputs: list
    pq: EvaluationProgram
    relevant: frozenset
    user: frozenset
    ctx: frozenset
    joined: frozenset
    kept: frozenset
    order: frozenset
    candidates: list      # preferred answer sets, all inputs
    best: list            # optimal ones within each input
    queries: list

    def selections(self):
        """query constant -> sorted source constants named by an optimal answer set."""
        out = {q: set() for q in self.queries}
        for c in self.best:
            for l in c.selected():
                out.setdefault(l.args[1], set()).add(l.args[0])
        return {q: sorted(s, key=lambda t: t.sort_key()) for q, s in
                sorted(out.items(), key=lambda kv: kv[0].sort_key())}


def evaluate_selection(base: SelectionBase, rq, max_sources=None) -> SelectionReport:
    inputs = selection_inputs(base, rq)
    pq = build_evaluation_program(base, rq, inputs, max_sources)
    relevant = relevant_rules(base, pq, inputs)
    user = user_order(base, pq, relevant)
    ctx = context_order(relevant, inputs)
    joined, kept, order = combine_orders(user, ctx)
    check_strict_partial_order(order)
    levels = max_level(Program((), pq.weak))
    candidates, best = [], []
    for i, y in enumerate(inputs):
        prog = Program(pq.rules + facts_program(y.y).rules, pq.weak)
        pref = [x for x in answer_sets(prog) if preferred_listing(prog, order, x) is not None]
        for x in pref:
            candidates.append(Candidate(x, weight_vector(prog, x, levels), i))
        for x, v in optimal_among(prog, pref):
            best.append(Candidate(x, v, i))
    queries = sorted({l.args[0] for y in inputs for l in y.y
                      if l.predicate == "query" and len(l.args) == 1 and not l.negated},
                     key=lambda t: t.sort_key())
    return SelectionReport(inputs, pq, relevant, user, ctx, joined, kept, order,
                           candidates, best, queries)


def selection_answer_sets(base: SelectionBase, rq, max_sources=None):
    """Optimal selection answer sets as (answer set, weights, input) triples."""
    rep = evaluate_selection(base, rq, max_sources)
    return [(c.answer_set, c.weights, rep.inputs[c.input_index]) for c in rep.best]


def project(x, preds):
    return frozenset(l for l in getattr(x, "literals", x) if l.signature in preds)


def select_source(base: SelectionBase, query, max_sources=None):
    """query constant -> list of chosen sources (empty when none applies).

    ``query`` is XML-QL text, a parsed query, or parser facts.
    """
    from ..xmlql.facts import emit_parser_facts
    from ..xmlql.syntax import parse_query
    if isinstance(query, str):
        query = parse_query(query)
    if not hasattr(query, "facts"):
        query = emit_parser_facts(query)
    return evaluate_selection(base, query, max_sources).selections()


def combined_preferred_answer_sets(base: SelectionBase, rq, report: SelectionReport = None):
    """Preferred answer sets of qa + R(Q) + sd + dom + the evaluation program, under <."""
    rep = report or evaluate_selection(base, rq)
    ctx = ground_program(base.context_program() + facts_program(_facts_of(rq)))
    prog = Program(ctx.rules + rep.pq.rules, rep.pq.weak)
    return [x for x in answer_sets(prog) if preferred_listing(prog, rep.order, x) is not None]


def blocking_audit(report: SelectionReport, answer_set):
    """Core instances applicable in the answer set but not applied, lacking a witness.

    A witness is an auxiliary rule deriving the complementary literal, or a
    core instance, whose body and head hold and which is not below the
    blocked instance. Returns the list of offending instances (empty if fine).
    """
    x = getattr(answer_set, "literals", answer_set)
    pq = report.pq
    lower = report.order
    bad = []
    for rd, orig in pq.originals.items():
        if not orig.body_true(x) or orig.head in x:
            continue
        comp = orig.head.complement()
        ok = False
        for r2 in pq.rules:
            kind = pq.kinds[r2]
            if kind == "aux" and r2.head != comp:
                continue
            if kind not in ("aux", "core"):
                continue
            if r2.head in x and r2.body_true(x) and (r2, rd) not in lower:
                ok = True
                break
        if not ok:
            bad.append(rd)
    return bad


def format_relation(pairs, names):
    lines = sorted(f"{names.get(a, str(a))} < {names.get(b, str(b))}" for a, b in pairs)
    return lines
