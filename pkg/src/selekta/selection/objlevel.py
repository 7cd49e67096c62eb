"""Rule priorities computed inside a logic program.

Rules of the evaluation program get string names; the compiled program
derives ``rel(n)`` for relevant rules, ``pr`` for the joined relation,
``pr_star`` for its transitive closure and ``pref(n1, n2)`` exactly for
the pairs of the final order.
"""
from ..logic.grounding import ground_program
from ..logic.parser import parse_program
from ..logic.terms import Literal, Program, Rule, WeakConstraint, facts_program, string
from ..optimizer import max_level
from ..preference import ground_user_order
from .engine import DEFAULT_CLASS, DEFAULT_PATH, _contexts, _facts_of, dagger, evaluate_selection

CLOSURE_RULES = parse_program("""
pr_star(N1,N2) :- pr(N1,N2).
pr_star(N1,N3) :- pr_star(N1,N2), pr(N2,N3).
pref(N1,N2) :- pr(N1,N2), not pr_star(N2,N1).
pref(N1,N3) :- pref(N1,N2), pref(N2,N3).
""").rules


def _rename_literal(l: Literal, suffix):
    return Literal(f"{l.predicate}_{suffix}", l.args, l.negated)


def _rename_rule(r: Rule, suffix):
    return Rule(_rename_literal(r.head, suffix) if r.head else None,
                tuple(_rename_literal(l, suffix) for l in r.pos),
                tuple(_rename_literal(l, suffix) for l in r.neg),
                r.builtins, r.aggregates, None, tuple(_rename_literal(l, suffix) for l in r.domain))


def _declared(base):
    out = {}
    for r in base.core:
        if r.label is not None:
            out.setdefault(r.label.name, set()).add(len(r.label.args))
    return out


def compile_object_level(base, rq, report=None, simplify=None) -> Program:
    """The program deriving rel/pr/pr_star/pref facts for a query.

    With a unique selection input the relevance rules read the shared
    context directly; otherwise each rule gets its own renamed copy of the
    context program and weak constraints favour deriving ``rel``.
    """
    rep = report or evaluate_selection(base, rq)
    pq = rep.pq
    if simplify is None:
        simplify = len(rep.inputs) == 1
    name = {r: string(n) for r, n in pq.names.items()}

    def rel(r):
        return Literal("rel", (name[r],))

    rules, weak = [], []
    level = max_level(Program((), pq.weak)) + 1
    if not simplify:
        ctx = base.context_program() + facts_program(_facts_of(rq))
    for i, r in enumerate(pq.rules):
        pos, neg = dagger(r, base.vocab)
        if simplify:
            rules.append(Rule(rel(r), pos, neg))
        else:
            suffix = f"r{i}"
            for c in ctx.rules + (DEFAULT_CLASS, DEFAULT_PATH):
                rules.append(_rename_rule(c, suffix))
            rules.append(Rule(rel(r), tuple(_rename_literal(l, suffix) for l in pos),
                              tuple(_rename_literal(l, suffix) for l in neg)))
            weak.append(WeakConstraint((), (rel(r),), (), 1, level))

    def pr(a, b, extra=()):
        rules.append(Rule(Literal("pr", (name[a], name[b])), (rel(a), rel(b)) + tuple(extra)))

    for a, b in ground_user_order(base.prefs, pq.of_kind("core"), _declared(base)):
        pr(a, b)
    info = {r: _contexts(r) for r in pq.rules}
    info = {r: v for r, v in info.items() if any(v)}
    for r1, (acc1, dc1, dp1) in info.items():
        for r2, (acc2, dc2, dp2) in info.items():
            if r1 == r2:
                continue
            accq2 = {a[3] for a in acc2}
            if dp1 & (accq2 | dc2) or dc1 & accq2:
                pr(r1, r2)
            for o, t1, p1, q in acc1:
                for o2, t2, p2, q2 in acc2:
                    if o2 == o and q2 == q:
                        pr(r1, r2, (Literal("subpath", (o, t1, p1, t2, p2)),))
    return Program(tuple(rules) + CLOSURE_RULES, tuple(weak))


def object_level_program(base, rq, report=None, simplify=None) -> Program:
    """Ground context + evaluation program + compiled priorities."""
    rep = report or evaluate_selection(base, rq)
    obj = compile_object_level(base, rq, rep, simplify)
    ctx = base.context_program() + facts_program(_facts_of(rq))
    g = ground_program(ctx + Program(rep.pq.rules) + obj)
    return Program(g.rules, g.weak + rep.pq.weak)


def pref_pairs(x):
    """Pairs of rule names (lower, higher) encoded by pref atoms of a set."""
    return {(l.args[0].value, l.args[1].value) for l in getattr(x, "literals", x)
            if l.predicate == "pref" and len(l.args) == 2 and not l.negated}
