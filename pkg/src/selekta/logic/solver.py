"""Answer sets of ground extended logic programs.

Search over the atoms that occur under default negation or inside
aggregates. Each node runs an alternating fixpoint that bounds every answer
set compatible with the current assumptions from below (L) and above (U);
leaves are those where the bounds meet, and are re-checked against the
reduct definition before being reported.
"""
from dataclasses import dataclass

import networkx as nx

from .grounding import ground_program
from .terms import Program, Rule, format_literal_set, sorted_literals


@dataclass(frozen=True)
class AnswerSet:
    literals: frozenset
    generating: frozenset = frozenset()

    def __contains__(self, l):
        return l in self.literals

    def __iter__(self):
        return iter(sorted_literals(self.literals))

    def __len__(self):
        return len(self.literals)

    def __str__(self):
        return format_literal_set(self.literals)

    def of_predicate(self, name, arity=None):
        return {l for l in self.literals
                if l.predicate == name and (arity is None or len(l.args) == arity)}


def is_consistent(lits) -> bool:
    return not any(l.negated and l.complement() in lits for l in lits)


def gl_reduct(p: Program, x) -> Program:
    """Positive program of rules whose default-negated part and aggregates hold in x."""
    p = ground_program(p)
    out = []
    for r in p.rules:
        if any(l in x for l in r.neg):
            continue
        if not all(a.evaluate(x) for a in r.aggregates):
            continue
        out.append(Rule(r.head, r.pos))
    return Program(tuple(out))


def minimal_model(p: Program):
    """Least model of a positive program; returns (model, violated_constraint)."""
    heads_by_atom = {}
    counters = []
    model = set()
    queue = []
    violated = False
    for i, r in enumerate(p.rules):
        counters.append(len(r.pos))
        for l in r.pos:
            heads_by_atom.setdefault(l, []).append(i)
        if not r.pos:
            queue.append(i)
    while queue:
        i = queue.pop()
        r = p.rules[i]
        if r.head is None:
            violated = True
            continue
        if r.head in model:
            continue
        model.add(r.head)
        for j in heads_by_atom.get(r.head, ()):
            counters[j] -= 1
            if counters[j] == 0:
                queue.append(j)
    return model, violated


def is_answer_set(p: Program, x) -> bool:
    """Check the definition directly: x is the consistent least model of its reduct."""
    x = frozenset(x)
    if not is_consistent(x):
        return False
    model, violated = minimal_model(gl_reduct(p, x))
    return not violated and model == x


def generating_rules(p: Program, x) -> frozenset:
    p = ground_program(p)
    return frozenset(r for r in p.rules if r.head is not None and r.body_true(x))


class _Compiled:
    def __init__(self, p: Program):
        self.rules = list(p.rules)
        atoms = {}

        def aid(l):
            if l not in atoms:
                atoms[l] = len(atoms)
            return atoms[l]

        self.head, self.pos, self.neg, self.aggs = [], [], [], []
        for r in self.rules:
            self.head.append(aid(r.head) if r.head is not None else -1)
            self.pos.append(tuple(aid(l) for l in r.pos))
            self.neg.append(tuple(aid(l) for l in r.neg))
            aggs = []
            for a in r.aggregates:
                groups = {}
                for tup, lits in a.elements:
                    groups.setdefault(tup, []).append(tuple(aid(l) for l in lits))
                lo, hi = a.count_range()
                aggs.append((list(groups.values()), lo, hi))
            self.aggs.append(aggs)
        self.atoms = list(atoms)
        self.n = len(self.atoms)
        self.watch = [[] for _ in range(self.n)]
        for i, ps in enumerate(self.pos):
            for a in ps:
                self.watch[a].append(i)
        self.complement = [atoms.get(l.complement(), -1) for l in self.atoms]
        guess = set()
        for ns in self.neg:
            guess.update(ns)
        for aggs in self.aggs:
            for groups, _, _ in aggs:
                for conds in groups:
                    for c in conds:
                        guess.update(c)
        self.guess = sorted(guess)

    def lfp(self, enabled):
        counters = [len(ps) for ps in self.pos]
        model = bytearray(self.n)
        stack = [i for i in range(len(self.rules)) if enabled[i] and not self.pos[i]]
        fired_constraint = False
        while stack:
            i = stack.pop()
            h = self.head[i]
            if h < 0:
                fired_constraint = True
                continue
            if model[h]:
                continue
            model[h] = 1
            for j in self.watch[h]:
                counters[j] -= 1
                if counters[j] == 0 and enabled[j]:
                    stack.append(j)
        return model, fired_constraint

    @staticmethod
    def _count_bounds(groups, true_flags, possible_flags):
        lo = hi = 0
        for conds in groups:
            if any(all(true_flags[c] for c in cs) for cs in conds):
                lo += 1
            if any(all(possible_flags[c] for c in cs) for cs in conds):
                hi += 1
        return lo, hi

    def agg_status(self, i, true_flags, possible_flags):
        """(certainly_true, possibly_true) for the aggregates of rule i."""
        cert, poss = True, True
        for groups, lo, hi in self.aggs[i]:
            cmin, cmax = self._count_bounds(groups, true_flags, possible_flags)
            if not (cmin >= lo and (hi is None or cmax <= hi)):
                cert = False
            if not (cmax >= lo and (hi is None or cmin <= hi)):
                poss = False
        return cert, poss

    def propagate(self, assign):
        """Return (L, U) or None on conflict. assign maps atom id -> bool."""
        n = self.n
        nrules = len(self.rules)
        upper = bytearray(b"\x01") * n
        lower = bytearray(n)
        for a, v in assign.items():
            if not v:
                upper[a] = 0
        while True:
            true_flags = bytearray(lower)
            for a, v in assign.items():
                if v:
                    true_flags[a] = 1
            possible = bytearray(upper)
            for a, v in assign.items():
                if not v:
                    possible[a] = 0
            en_low = [False] * nrules
            en_up = [False] * nrules
            for i in range(nrules):
                ns = self.neg[i]
                cert, poss = (True, True) if not self.aggs[i] else self.agg_status(i, true_flags, possible)
                en_low[i] = cert and all(not possible[a] for a in ns)
                en_up[i] = poss and not any(true_flags[a] for a in ns)
            new_lower, viol = self.lfp(en_low)
            if viol:
                return None
            new_upper, _ = self.lfp(en_up)
            for a, v in assign.items():
                if not v:
                    new_upper[a] = 0
            if new_lower == lower and new_upper == upper:
                break
            lower = new_lower
            upper = bytearray(x & y for x, y in zip(upper, new_upper))
        for a, v in assign.items():
            if v and not upper[a]:
                return None
            if not v and lower[a]:
                return None
        for a in range(n):
            if lower[a] and not upper[a]:
                return None
            c = self.complement[a]
            if lower[a] and c >= 0 and lower[c]:
                return None
        return lower, upper

    def solve(self):
        results = []
        stack = [{}]
        while stack:
            assign = stack.pop()
            bounds = self.propagate(assign)
            if bounds is None:
                continue
            lower, upper = bounds
            choice = None
            for a in self.guess:
                if a in assign:
                    continue
                if lower[a]:
                    assign[a] = True
                elif not upper[a]:
                    assign[a] = False
                elif choice is None:
                    choice = a
            if choice is None:
                # every guess atom is fixed, so both bounds come from the same reduct
                if lower == upper:
                    results.append(frozenset(self.atoms[a] for a in range(self.n) if lower[a]))
                continue
            stack.append({**assign, choice: False})
            stack.append({**assign, choice: True})
        return results


def answer_sets(p: Program, limit=None):
    """All answer sets, sorted by their literal sequence. Weak constraints are ignored."""
    g = ground_program(p)
    core = Program(g.rules)
    comp = _Compiled(core)
    out = []
    for x in comp.solve():
        if not is_answer_set(core, x):
            continue
        out.append(AnswerSet(x, generating_rules(core, x)))
    out = sorted(set(out), key=lambda s: [l.sort_key() for l in sorted_literals(s.literals)])
    return out[:limit] if limit else out


def dependency_graph(p: Program):
    """Literal dependency graph; edge attribute ``negative`` marks default negation."""
    g = ground_program(p)
    graph = nx.DiGraph()
    for r in g.rules:
        if r.head is None:
            continue
        graph.add_node(r.head)
        for l in r.pos:
            if not graph.has_edge(r.head, l):
                graph.add_edge(r.head, l, negative=False)
        nonmono = list(r.neg)
        for a in r.aggregates:
            for _, lits in a.elements:
                nonmono.extend(lits)
        for l in nonmono:
            graph.add_edge(r.head, l, negative=True)
    return graph


def is_locally_stratified(p: Program) -> bool:
    """No cycle of the instantiated dependency graph passes through a negative edge."""
    graph = dependency_graph(p)
    comp = {}
    for k, scc in enumerate(nx.strongly_connected_components(graph)):
        for v in scc:
            comp[v] = k
    for u, v, data in graph.edges(data=True):
        if data["negative"] and comp[u] == comp[v]:
            return False
    return True
