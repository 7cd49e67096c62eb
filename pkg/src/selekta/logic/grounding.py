"""Bottom-up instantiation.

Only instances whose positive body can be derived are produced: the
grounder computes the least fixpoint of the program with default negation
and aggregates ignored, and instantiates rules against it (semi-naive).
The result has the same answer sets as the full Herbrand instantiation.
"""
from collections import defaultdict

from ..errors import UnsafeRule
from .terms import (Comparison, Constant, CountAggregate, Literal, Program, Rule,
                    Variable, WeakConstraint)


def _binding_closure(atoms, builtins):
    bound = set()
    for l in atoms:
        bound.update(l.variables())
    changed = True
    while changed:
        changed = False
        for b in builtins:
            if b.op != "=":
                continue
            for x, y in ((b.left, b.right), (b.right, b.left)):
                if isinstance(x, Variable) and x not in bound and (
                        not isinstance(y, Variable) or y in bound):
                    bound.add(x)
                    changed = True
    return bound


def global_variables(rule: Rule):
    out = set()
    for l in ([rule.head] if rule.head else []) + list(rule.pos) + list(rule.neg) + list(rule.domain):
        out.update(l.variables())
    for b in rule.builtins:
        out.update(b.variables())
    for a in rule.aggregates:
        out.update(a.outer_variables())
    return out


def check_safety(rule, text=None):
    """Raise UnsafeRule if some global variable is not bound positively."""
    if isinstance(rule, WeakConstraint):
        rule = rule.as_rule()
    bound = _binding_closure(list(rule.pos) + list(rule.domain), rule.builtins)
    missing = global_variables(rule) - bound
    if missing:
        names = ", ".join(sorted(v.name for v in missing))
        raise UnsafeRule(f"unsafe variable(s) {names} in: {text or rule}")


def _unify(pattern: Literal, atom: Literal, subst):
    """Extend subst so that pattern matches atom, or return None."""
    out = None
    for p, a in zip(pattern.args, atom.args):
        if isinstance(p, Variable):
            cur = subst.get(p) if out is None else out.get(p)
            if cur is None:
                if out is None:
                    out = dict(subst)
                out[p] = a
            elif cur != a:
                return None
        elif p != a:
            return None
    return subst if out is None else out


class AtomStore:
    """Insertion-ordered atom set with per-argument indexes."""

    def __init__(self):
        self.by_key = defaultdict(list)
        self.index = defaultdict(lambda: defaultdict(list))
        self.members = set()

    def __contains__(self, atom):
        return atom in self.members

    def __len__(self):
        return len(self.members)

    def add(self, atom):
        if atom in self.members:
            return False
        self.members.add(atom)
        key = atom.key
        self.by_key[key].append(atom)
        for i, a in enumerate(atom.args):
            self.index[(key, i)][a].append(atom)
        return True

    def candidates(self, pattern: Literal, subst):
        key = pattern.key
        best = None
        for i, p in enumerate(pattern.args):
            v = p if isinstance(p, Constant) else subst.get(p)
            if v is not None:
                lst = self.index[(key, i)].get(v, ())
                if best is None or len(lst) < len(best):
                    best = lst
                    if not best:
                        break
        return self.by_key.get(key, ()) if best is None else best


def _apply_builtins(builtins, subst):
    """Bind '=' variables and test the comparisons; None on failure."""
    pending = list(builtins)
    while pending:
        progress = False
        rest = []
        for b in pending:
            left = subst.get(b.left, b.left) if isinstance(b.left, Variable) else b.left
            right = subst.get(b.right, b.right) if isinstance(b.right, Variable) else b.right
            lv, rv = isinstance(left, Variable), isinstance(right, Variable)
            if not lv and not rv:
                if not Comparison(b.op, left, right).evaluate():
                    return None
                progress = True
            elif b.op == "=" and lv != rv:
                subst = dict(subst)
                if lv:
                    subst[left] = right
                else:
                    subst[right] = left
                progress = True
            else:
                rest.append(b)
        if not progress:
            return subst if not rest else None
        pending = rest
    return subst


def _early_builtins(builtins, subst):
    """Cheap pruning: reject as soon as a fully bound comparison fails."""
    for b in builtins:
        left = subst.get(b.left, b.left) if isinstance(b.left, Variable) else b.left
        right = subst.get(b.right, b.right) if isinstance(b.right, Variable) else b.right
        if isinstance(left, Constant) and isinstance(right, Constant):
            if not Comparison(b.op, left, right).evaluate():
                return False
    return True


class _Compiled:
    def __init__(self, index, rule):
        self.index = index
        self.rule = rule
        self.atoms = list(rule.pos) + list(rule.domain)
        self.builtins = rule.builtins
        glob = global_variables(rule)
        self.aggregates = []
        for a in rule.aggregates:
            local = a.local_variables() - glob
            self.aggregates.append((a, local))


class Grounder:
    def __init__(self, program: Program):
        self.program = program
        self.store = AtomStore()
        self.instances = {}

    def _matches(self, atoms, first, subst, builtins, delta_store):
        """Yield substitutions matching ``atoms`` with atoms[first] taken from delta."""
        order = [first] if first is not None else []
        rest = [i for i in range(len(atoms)) if i != first]
        bound = set(subst)
        if first is not None:
            bound.update(atoms[first].variables())
        while rest:
            best = max(rest, key=lambda i: (sum(1 for v in atoms[i].variables() if v in bound),
                                            -len(atoms[i].args), -i))
            rest.remove(best)
            order.append(best)
            bound.update(atoms[best].variables())

        def rec(k, s):
            if k == len(order):
                yield s
                return
            i = order[k]
            src = delta_store if (first is not None and k == 0) else self.store
            for atom in list(src.candidates(atoms[i], s)):
                s2 = _unify(atoms[i], atom, s)
                if s2 is not None and _early_builtins(builtins, s2):
                    yield from rec(k + 1, s2)

        yield from rec(0, subst)

    def _instantiate(self, comp, subst):
        rule = comp.rule
        subst = _apply_builtins(comp.builtins, subst)
        if subst is None:
            return None
        head = rule.head.substitute(subst) if rule.head else None
        pos = tuple(l.substitute(subst) for l in rule.pos)
        neg = tuple(l.substitute(subst) for l in rule.neg)
        aggs = []
        for a, local in comp.aggregates:
            if a.elements is not None:  # already ground
                aggs.append(a)
                continue
            guards = tuple((op, subst.get(b, b) if isinstance(b, Variable) else b) for op, b in a.guards)
            aggs.append(CountAggregate(a.terms, a.conditions, guards, _Pending(a, subst, local)))
        label = rule.label.substitute(subst) if rule.label else None
        return Rule(head, pos, neg, (), tuple(aggs), label)

    def _expand_aggregate(self, agg: CountAggregate):
        pend = agg.elements
        elements = []
        seen = set()
        conds = pend.agg.conditions
        for s in self._matches(conds, None, pend.subst, (), None):
            tup = tuple(s.get(t, t) if isinstance(t, Variable) else t for t in pend.agg.terms)
            lits = tuple(c.substitute(s) for c in conds)
            if (tup, lits) not in seen:
                seen.add((tup, lits))
                elements.append((tup, lits))
        return CountAggregate((), (), agg.guards, tuple(elements))

    def run(self) -> Program:
        prog = self.program
        for r in prog.rules:
            check_safety(r)
        for w in prog.weak:
            check_safety(w)

        facts = []
        compiled = []
        for i, r in enumerate(prog.rules):
            if r.is_fact and r.head.is_ground and not r.domain and r.label is None:
                facts.append(r)
            elif r.head is not None:
                compiled.append(_Compiled(i, r))
        constraints = [_Compiled(i, r) for i, r in enumerate(prog.rules) if r.head is None]

        order = []  # ground rule instances in derivation order
        origin = []
        seen = set()
        fact_index = {id(r): i for i, r in enumerate(prog.rules)}

        def emit(inst, idx):
            if inst is not None and inst not in seen:
                seen.add(inst)
                order.append(inst)
                origin.append(idx)
                return True
            return False

        delta = AtomStore()
        for r in facts:
            if emit(r, fact_index[id(r)]):
                if self.store.add(r.head):
                    delta.add(r.head)

        # rules without positive atoms fire once
        for comp in compiled:
            if not comp.atoms:
                inst = self._instantiate(comp, {})
                if emit(inst, comp.index) and self.store.add(inst.head):
                    delta.add(inst.head)

        by_key = defaultdict(list)
        for comp in compiled:
            for j, a in enumerate(comp.atoms):
                by_key[a.key].append((comp, j))

        while len(delta):
            new = AtomStore()
            for key in list(delta.by_key):
                for comp, j in by_key.get(key, ()):
                    for s in self._matches(comp.atoms, j, {}, comp.builtins, delta):
                        inst = self._instantiate(comp, s)
                        if emit(inst, comp.index) and inst.head not in self.store:
                            new.add(inst.head)
            for a in new.by_key.values():
                for atom in a:
                    self.store.add(atom)
            delta = new

        for comp in constraints:
            for s in self._matches(comp.atoms, None, {}, comp.builtins, None):
                emit(self._instantiate(comp, s), comp.index)

        rules = []
        for inst in order:
            if any(isinstance(a.elements, _Pending) for a in inst.aggregates):
                inst = Rule(inst.head, inst.pos, inst.neg, (),
                            tuple(self._expand_aggregate(a) if isinstance(a.elements, _Pending)
                                  else a for a in inst.aggregates), inst.label)
            rules.append(inst)
        self.origins = tuple(origin)

        weak = []
        for idx, w in enumerate(prog.weak):
            comp = _Compiled(idx, w.as_rule())
            local = set()
            for s in self._matches(comp.atoms, None, {}, comp.builtins, None):
                s = _apply_builtins(w.builtins, s)
                if s is None:
                    continue
                g = WeakConstraint(tuple(l.substitute(s) for l in w.pos),
                                   tuple(l.substitute(s) for l in w.neg), (), w.weight, w.level)
                if g not in local:
                    local.add(g)
                    weak.append(g)
        return Program(tuple(rules), tuple(weak), prog.preferences)


class _Pending:
    """Aggregate awaiting element expansion after the fixpoint."""

    def __init__(self, agg, subst, local):
        self.agg = agg
        self.subst = {k: v for k, v in subst.items() if k not in local}

    def __hash__(self):
        return hash((self.agg, tuple(sorted((k.name, v.sort_key()) for k, v in self.subst.items()))))

    def __eq__(self, other):
        return isinstance(other, _Pending) and self.agg == other.agg and self.subst == other.subst


def ground_program(program: Program) -> Program:
    """Instantiate a program; ground programs are returned unchanged."""
    if program.is_ground:
        return program
    return Grounder(program).run()


def ground_with_origins(program: Program):
    """Instantiate and report, per ground rule, the index of the rule it came from."""
    g = Grounder(program)
    return g.run(), g.origins


def possible_atoms(program: Program):
    """Atoms that may be derivable (heads of the instantiated program)."""
    g = ground_program(program)
    return {r.head for r in g.rules if r.head is not None}
