"""Preferred answer sets of prioritized programs.

An order is a set of pairs ``(a, b)`` of ground rules, read ``a < b``:
``b`` has preference over ``a``.

An answer set X is preferred when its generating rules can be listed so
that (1) each positive body is produced by earlier heads, (2) every
generating rule comes after all generating rules preferred over it, and
(3) every non-generating rule preferred over a listed rule, whose positive
body holds in X, is already defeated by an earlier head. Each condition
only gets easier as more rules are listed, so a greedy construction finds
such a listing whenever one exists.
"""
from collections import defaultdict

from .errors import ArityMismatch, NotStrictPartialOrder, UnknownLabel
from .logic.grounding import _unify, ground_program
from .logic.solver import answer_sets, generating_rules
from .logic.terms import Label, Literal, Program


def transitive_closure(pairs):
    succ = defaultdict(set)
    for a, b in pairs:
        succ[a].add(b)
    out = set()
    for start in list(succ):
        stack = list(succ[start])
        seen = set()
        while stack:
            n = stack.pop()
            if n in seen:
                continue
            seen.add(n)
            out.add((start, n))
            stack.extend(succ.get(n, ()))
    return frozenset(out)


def check_strict_partial_order(pairs):
    closure = transitive_closure(pairs)
    cyclic = [a for a, b in closure if a == b]
    if cyclic:
        names = sorted({rule_name(r) for r in cyclic})
        raise NotStrictPartialOrder("cyclic preference involving " + ", ".join(names))
    return closure


def rule_name(r) -> str:
    if getattr(r, "label", None) is not None:
        return str(r.label)
    return str(r)


def _match_label(pattern: Label, label: Label, subst):
    if label is None or label.name != pattern.name or len(label.args) != len(pattern.args):
        return None
    return _unify(Literal(pattern.name, pattern.args), Literal(label.name, label.args), subst)


def label_arities(rules):
    out = defaultdict(set)
    for r in rules:
        if r.label is not None:
            out[r.label.name].add(len(r.label.args))
    return out


def validate_declarations(decls, declared):
    """declared maps label name -> set of arities used by the program's rules."""
    for d in decls:
        for side in (d.lower, d.higher):
            if side.name not in declared:
                raise UnknownLabel(f"preference mentions unknown label {side.name!r}")
            if len(side.args) not in declared[side.name]:
                want = "/".join(str(a) for a in sorted(declared[side.name]))
                raise ArityMismatch(
                    f"label {side.name} used with {len(side.args)} argument(s), declared with {want}")


def ground_user_order(decls, ground_rules, declared=None):
    """Ground instances of preference declarations, transitively closed.

    A pair is produced for every two labelled rule instances that match
    the two sides of a declaration with one common substitution.
    """
    ground_rules = list(ground_rules)
    validate_declarations(decls, declared if declared is not None else label_arities(ground_rules))
    by_name = defaultdict(list)
    for r in ground_rules:
        if r.label is not None:
            by_name[r.label.name].append(r)
    pairs = set()
    for d in decls:
        for r1 in by_name.get(d.lower.name, ()):
            s1 = _match_label(d.lower, r1.label, {})
            if s1 is None:
                continue
            for r2 in by_name.get(d.higher.name, ()):
                if r2 is r1 or r2 == r1:
                    continue
                if _match_label(d.higher, r2.label, s1) is not None:
                    pairs.add((r1, r2))
    return check_strict_partial_order(pairs)


def _prefix_aggregates_hold(rule, heads):
    """Aggregate lower bounds must already be met by the heads listed so far."""
    for a in rule.aggregates:
        lo, _ = a.count_range()
        if len(a.present(heads)) < lo:
            return False
    return True


def preferred_listing(p: Program, order, x):
    """A listing of the generating rules witnessing preference, or None."""
    p = ground_program(p)
    x = frozenset(getattr(x, "literals", x))
    gr = generating_rules(p, x)
    better = defaultdict(set)  # rule -> rules preferred over it
    for a, b in order:
        better[a].add(b)

    need_pos = {}
    need_gen = {}
    need_block = {}
    watch_pos = defaultdict(list)
    gen_waiters = defaultdict(list)
    block_waiters = defaultdict(list)
    blockers_by_atom = defaultdict(list)
    blocked = set()

    heads_x = x
    for r in gr:
        need_pos[r] = len(r.pos)
        for l in r.pos:
            watch_pos[l].append(r)
        need_gen[r] = 0
        need_block[r] = 0
        for r2 in better.get(r, ()):
            if r2 in gr:
                need_gen[r] += 1
                gen_waiters[r2].append(r)
            elif r2.head is not None and all(l in heads_x for l in r2.pos) and all(
                    a.evaluate(heads_x) for a in r2.aggregates):
                if r2 not in block_waiters:
                    for l in r2.neg:
                        blockers_by_atom[l].append(r2)
                need_block[r] += 1
                block_waiters[r2].append(r)

    heads = set()
    listing = []
    placed = set()
    ready = [r for r in gr if need_pos[r] == 0 and need_gen[r] == 0 and need_block[r] == 0]
    waiting_agg = []

    def check(r):
        if r in placed or need_pos[r] or need_gen[r] or need_block[r]:
            return
        ready.append(r)

    while ready or waiting_agg:
        progressed = False
        while ready:
            r = ready.pop()
            if r in placed:
                continue
            if r.aggregates and not _prefix_aggregates_hold(r, heads):
                if r not in waiting_agg:
                    waiting_agg.append(r)
                continue
            placed.add(r)
            listing.append(r)
            progressed = True
            if r in waiting_agg:
                waiting_agg.remove(r)
            h = r.head
            if h not in heads:
                heads.add(h)
                for r3 in watch_pos.get(h, ()):
                    need_pos[r3] -= 1
                    check(r3)
                for r2 in blockers_by_atom.get(h, ()):
                    if r2 not in blocked:
                        blocked.add(r2)
                        for r3 in block_waiters[r2]:
                            need_block[r3] -= 1
                            check(r3)
            for r3 in gen_waiters.get(r, ()):
                need_gen[r3] -= 1
                check(r3)
        if not progressed:
            break
        ready.extend(waiting_agg)
    if len(placed) == len(gr):
        return listing
    return None


def is_preferred(p: Program, order, x) -> bool:
    return preferred_listing(p, order, x) is not None


def preferred_answer_sets(p: Program, order):
    check_strict_partial_order(order)
    g = ground_program(p)
    return [x for x in answer_sets(g) if is_preferred(g, order, x)]
