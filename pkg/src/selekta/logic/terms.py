"""Terms, literals, rules and programs.

Everything here is immutable and hashable so ground rules can be used as
keys in orders and answer sets.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Union

COMPARISON_OPS = ("=", "!=", "<", "<=", ">", ">=")
_FLIPPED = {"<": ">", "<=": ">=", ">": "<", ">=": "<=", "=": "=", "!=": "!="}


@dataclass(frozen=True, slots=True)
class Constant:
    """A symbolic, string or integer constant.

    ``quoted`` distinguishes the string ``"a"`` from the symbol ``a``.
    """
    value: Union[int, str]
    quoted: bool = False

    def __str__(self):
        if isinstance(self.value, int):
            return str(self.value)
        if self.quoted:
            escaped = self.value.replace("\\", "\\\\").replace('"', '\\"')
            return f'"{escaped}"'
        return self.value

    @property
    def is_ground(self):
        return True

    def sort_key(self):
        if isinstance(self.value, int):
            return (0, self.value, "")
        return (2 if self.quoted else 1, 0, self.value)


@dataclass(frozen=True, slots=True)
class Variable:
    name: str

    def __str__(self):
        return "_" if self.is_anonymous else self.name

    @property
    def is_anonymous(self):
        return self.name[:1] == "_" and self.name[1:].isdigit()

    @property
    def is_ground(self):
        return False

    def sort_key(self):
        return (3, 0, self.name)


Term = Union[Constant, Variable]


def sym(name: str) -> Constant:
    return Constant(name)


def string(text: str) -> Constant:
    return Constant(text, True)


def integer(n: int) -> Constant:
    return Constant(int(n))


def compare_terms(op: str, left: Constant, right: Constant) -> bool:
    """Evaluate a builtin comparison between two ground terms.

    Integers compare numerically; otherwise the term sort order is used.
    """
    if op == "=":
        return left == right
    if op == "!=":
        return left != right
    a, b = left.sort_key(), right.sort_key()
    if op == "<":
        return a < b
    if op == "<=":
        return a <= b
    if op == ">":
        return a > b
    if op == ">=":
        return a >= b
    raise ValueError(f"unknown comparison {op!r}")


def apply_term(t: Term, subst) -> Term:
    if isinstance(t, Variable):
        return subst.get(t, t)
    return t


@dataclass(frozen=True, slots=True)
class Literal:
    """An atom ``p(t1..tn)`` or its strong negation ``-p(t1..tn)``."""
    predicate: str
    args: tuple = ()
    negated: bool = False
    _h: int = field(default=0, init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_h", hash((self.predicate, self.args, self.negated)))

    def __hash__(self):
        return self._h

    def __str__(self):
        sign = "-" if self.negated else ""
        if not self.args:
            return sign + self.predicate
        return f"{sign}{self.predicate}({','.join(str(a) for a in self.args)})"

    @property
    def signature(self):
        return (self.predicate, len(self.args))

    @property
    def key(self):
        """Index key: strongly negated literals are their own predicate."""
        return (self.predicate, len(self.args), self.negated)

    @property
    def is_ground(self):
        return all(isinstance(a, Constant) for a in self.args)

    def complement(self) -> "Literal":
        return Literal(self.predicate, self.args, not self.negated)

    def variables(self) -> Iterator[Variable]:
        for a in self.args:
            if isinstance(a, Variable):
                yield a

    def substitute(self, subst) -> "Literal":
        if not subst:
            return self
        return Literal(self.predicate, tuple(apply_term(a, subst) for a in self.args), self.negated)

    def sort_key(self):
        return (self.predicate, self.negated, len(self.args), tuple(a.sort_key() for a in self.args))


def lit(pred: str, *args, neg=False) -> Literal:
    """Convenience constructor: str args become symbols or variables by case."""
    conv = []
    for a in args:
        if isinstance(a, (Constant, Variable)):
            conv.append(a)
        elif isinstance(a, int):
            conv.append(integer(a))
        elif a[:1].isupper() or a[:1] == "_":
            conv.append(Variable(a))
        else:
            conv.append(sym(a))
    return Literal(pred, tuple(conv), neg)


def sorted_literals(lits: Iterable[Literal]) -> list:
    return sorted(lits, key=Literal.sort_key)


def format_literal_set(lits: Iterable[Literal]) -> str:
    return "{" + ", ".join(str(l) for l in sorted_literals(lits)) + "}"


@dataclass(frozen=True, slots=True)
class Comparison:
    op: str
    left: Term
    right: Term

    def __str__(self):
        return f"{self.left} {self.op} {self.right}"

    def variables(self):
        for t in (self.left, self.right):
            if isinstance(t, Variable):
                yield t

    def substitute(self, subst):
        return Comparison(self.op, apply_term(self.left, subst), apply_term(self.right, subst))

    def evaluate(self):
        return compare_terms(self.op, self.left, self.right)


@dataclass(frozen=True, slots=True)
class CountAggregate:
    """``#count{V1..Vn : L1..Lm}`` with guards ``count op bound``.

    After grounding ``elements`` holds ``(tuple, literal)`` pairs and the
    conditions are empty; before grounding ``terms``/``conditions`` hold
    the element template.
    """
    terms: tuple = ()
    conditions: tuple = ()
    guards: tuple = ()
    elements: Optional[tuple] = None

    def __str__(self):
        if self.elements is not None:
            inner = "; ".join(
                f"{','.join(str(t) for t in tup)}:{','.join(str(l) for l in lits)}"
                for tup, lits in self.elements)
        else:
            inner = f"{','.join(str(t) for t in self.terms)}:{','.join(str(c) for c in self.conditions)}"
        text = "#count{" + inner + "}"
        guards = list(self.guards)
        if len(guards) == 2:  # written as ``lo <= #count{..} <= hi``
            op, bound = guards.pop(0)
            text = f"{bound} {_FLIPPED[op]} {text}"
        for op, bound in guards:
            text += f" {op} {bound}"
        return text

    def outer_variables(self):
        for _, bound in self.guards:
            if isinstance(bound, Variable):
                yield bound

    def local_variables(self):
        seen = set()
        for t in self.terms:
            if isinstance(t, Variable):
                seen.add(t)
        for c in self.conditions:
            seen.update(c.variables())
        return seen

    def holds_for(self, count: int) -> bool:
        return all(compare_terms(op, Constant(count), bound) for op, bound in self.guards)

    def present(self, interpretation):
        """Distinct element tuples whose condition literals all hold."""
        return {tup for tup, lits in self.elements if all(l in interpretation for l in lits)}

    def evaluate(self, interpretation) -> bool:
        return self.holds_for(len(self.present(interpretation)))

    def count_range(self):
        """Smallest and largest count satisfying all guards (None = unbounded)."""
        lo, hi = 0, None
        for op, bound in self.guards:
            b = bound.value
            if op in (">", ">="):
                lo = max(lo, b + 1 if op == ">" else b)
            elif op in ("<", "<="):
                v = b - 1 if op == "<" else b
                hi = v if hi is None else min(hi, v)
            elif op == "=":
                lo = max(lo, b)
                hi = b if hi is None else min(hi, b)
        return lo, hi


@dataclass(frozen=True)
class Label:
    """Rule label ``name(args)``; args may contain variables before grounding."""
    name: str
    args: tuple = ()

    def __str__(self):
        if not self.args:
            return self.name
        return f"{self.name}({','.join(str(a) for a in self.args)})"

    def substitute(self, subst):
        return Label(self.name, tuple(apply_term(a, subst) for a in self.args))


def _dedup(items):
    seen = []
    for i in items:
        if i not in seen:
            seen.append(i)
    return tuple(seen)


@dataclass(frozen=True)
class Rule:
    """``head <- pos, not neg, builtins, aggregates``. A missing head is a constraint.

    ``domain`` literals are only used to enumerate bindings while grounding
    and are dropped from ground instances.
    """
    head: Optional[Literal]
    pos: tuple = ()
    neg: tuple = ()
    builtins: tuple = ()
    aggregates: tuple = ()
    label: Optional[Label] = None
    domain: tuple = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "pos", _dedup(self.pos))
        object.__setattr__(self, "neg", _dedup(self.neg))
        object.__setattr__(self, "builtins", _dedup(self.builtins))
        object.__setattr__(self, "_h", hash((self.head, self.pos, self.neg, self.builtins,
                                             self.aggregates, self.label)))

    def __hash__(self):
        return self._h

    @property
    def is_fact(self):
        return self.head is not None and not (self.pos or self.neg or self.builtins or self.aggregates)

    @property
    def is_constraint(self):
        return self.head is None

    @property
    def is_ground(self):
        lits = list(self.pos) + list(self.neg) + ([self.head] if self.head else [])
        return (all(l.is_ground for l in lits) and not self.builtins
                and all(a.elements is not None for a in self.aggregates))

    def variables(self):
        out = []
        for l in ([self.head] if self.head else []) + list(self.pos) + list(self.neg):
            out.extend(l.variables())
        for b in self.builtins:
            out.extend(b.variables())
        for a in self.aggregates:
            out.extend(a.outer_variables())
        return _dedup(out)

    def body_str(self):
        parts = [str(l) for l in self.pos] + [f"not {l}" for l in self.neg]
        parts += [str(b) for b in self.builtins] + [str(a) for a in self.aggregates]
        return ", ".join(parts)

    def __str__(self):
        prefix = f"@{self.label} " if self.label else ""
        head = str(self.head) if self.head else ""
        body = self.body_str()
        if not body:
            return f"{prefix}{head}."
        return f"{prefix}{head} :- {body}."

    def body_true(self, interpretation) -> bool:
        """Body (positive, default-negated and aggregate parts) holds in a set."""
        return (all(l in interpretation for l in self.pos)
                and not any(l in interpretation for l in self.neg)
                and all(a.evaluate(interpretation) for a in self.aggregates))

    def relabel(self, label):
        return Rule(self.head, self.pos, self.neg, self.builtins, self.aggregates, label, self.domain)


def fact(l: Literal) -> Rule:
    return Rule(l)


@dataclass(frozen=True)
class WeakConstraint:
    """``:~ body. [weight:level]`` with positive integer weight and level."""
    pos: tuple = ()
    neg: tuple = ()
    builtins: tuple = ()
    weight: int = 1
    level: int = 1

    def __post_init__(self):
        object.__setattr__(self, "pos", _dedup(self.pos))
        object.__setattr__(self, "neg", _dedup(self.neg))

    def __str__(self):
        parts = [str(l) for l in self.pos] + [f"not {l}" for l in self.neg]
        parts += [str(b) for b in self.builtins]
        return f":~ {', '.join(parts)}. [{self.weight}:{self.level}]"

    def as_rule(self) -> Rule:
        return Rule(None, self.pos, self.neg, self.builtins)

    def violated(self, interpretation) -> bool:
        return (all(l in interpretation for l in self.pos)
                and not any(l in interpretation for l in self.neg))


@dataclass(frozen=True)
class PreferenceDeclaration:
    """``lower < higher``: instances of ``higher`` take precedence.

    Written ``#prefer higher > lower.`` or ``#prefer lower < higher.``
    """
    lower: Label
    higher: Label

    def __str__(self):
        return f"#prefer {self.lower} < {self.higher}."


@dataclass(frozen=True)
class Program:
    rules: tuple = ()
    weak: tuple = ()
    preferences: tuple = ()

    def __add__(self, other: "Program") -> "Program":
        return Program(self.rules + other.rules, self.weak + other.weak,
                       self.preferences + other.preferences)

    @property
    def is_ground(self):
        return all(r.is_ground for r in self.rules) and all(
            not w.builtins and all(l.is_ground for l in w.pos + w.neg) for w in self.weak)

    @property
    def facts(self):
        return frozenset(r.head for r in self.rules if r.is_fact)

    def predicates(self):
        sigs = set()
        for r in self.rules:
            for l in ([r.head] if r.head else []) + list(r.pos) + list(r.neg):
                sigs.add(l.signature)
            for a in r.aggregates:
                for c in (a.conditions or ()):
                    sigs.add(c.signature)
        for w in self.weak:
            for l in w.pos + w.neg:
                sigs.add(l.signature)
        return sigs

    def head_predicates(self):
        return {r.head.signature for r in self.rules if r.head is not None}

    def __str__(self):
        lines = [str(r) for r in self.rules] + [str(w) for w in self.weak]
        lines += [str(p) for p in self.preferences]
        return "\n".join(lines)


def facts_program(lits: Iterable[Literal]) -> Program:
    return Program(tuple(Rule(l) for l in sorted_literals(set(lits))))
