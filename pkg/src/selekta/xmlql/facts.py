"""Low-level facts describing a parsed query.

Query nodes are named ``q1, q2, ...`` in document order and element
occurrences that carry a variable or a literal (reference points) are
named ``o1, o2, ...`` in order of first appearance.
"""
from dataclasses import dataclass, field

from ..errors import UnboundVariable
from ..logic.terms import Constant, Literal, sorted_literals, string, sym
from .syntax import (CompareCondition, Element, PatternCondition, Query, QueryNode,
                     SourceRef, Value, VarRef, parse_query)

EMPTY_PATH = " "


def path_string(tags) -> str:
    return "/".join(tags) if tags else EMPTY_PATH


@dataclass
class ParserFacts:
    facts: frozenset
    query_names: dict = field(default_factory=dict)   # q constant -> QueryNode
    irp_paths: dict = field(default_factory=dict)     # o constant -> element path
    bindings: dict = field(default_factory=dict)      # variable -> o constant

    def sorted(self):
        return sorted_literals(self.facts)


def _value_term(v: Value):
    return Constant(v.value) if isinstance(v.value, int) else string(v.value)


class _Emitter:
    def __init__(self, query: Query):
        self.query = query
        self.facts = []
        self.qcount = 0
        self.ocount = 0
        self.query_names = {}
        self.irp_paths = {}
        self.all_bindings = {}

    def add(self, pred, *args):
        l = Literal(pred, tuple(args))
        if l not in self.facts:
            self.facts.append(l)

    def new_irp(self, path):
        self.ocount += 1
        o = sym(f"o{self.ocount}")
        self.irp_paths[o.value] = list(path)
        return o

    def emit_path(self, o, path, q):
        for i, tag in enumerate(path):
            self.add("whereRef", o, string(tag), string(path_string(path[i + 1:])), q)
        for i in range(len(path) - 1, 0, -1):
            self.add("subpath", o, string(path[i]), string(path_string(path[i + 1:])),
                     string(path[i - 1]), string(path_string(path[i:])))

    def run(self):
        self.node(self.query.body, None, {}, [])
        return ParserFacts(frozenset(self.facts), self.query_names, self.irp_paths, self.all_bindings)

    def node(self, node: QueryNode, parent, scope, construct_prefix):
        self.qcount += 1
        q = sym(f"q{self.qcount}")
        self.query_names[q.value] = node
        if parent is None:
            self.add("query_cand", q)
        else:
            self.add("sub_query", q, parent)
        scope = dict(scope)   # variable -> (o, path)
        local = {}
        for cond in node.where:
            if isinstance(cond, PatternCondition):
                self.pattern_condition(cond, q, scope, local)
        for cond in node.where:
            if isinstance(cond, CompareCondition):
                self.compare(cond, scope)
        if node.construct is not None:
            self.construct(node.construct, q, scope, list(construct_prefix))

    def pattern_condition(self, cond, q, scope, local):
        src = cond.source
        if isinstance(src, SourceRef):
            if src.var is not None and self.query.params and src.var not in self.query.params:
                raise UnboundVariable(f"source variable ${src.var} is not a parameter",
                                      cond.line, cond.col)
            prefix = []
            root = cond.pattern.tag
            self.add("source", string(root), q)
            self.add("db_name", string(root))
        else:
            if src.name not in scope:
                raise UnboundVariable(f"variable ${src.name} is not bound", src.line, src.col)
            prefix = scope[src.name][1]
        self.walk_pattern(cond.pattern, list(prefix), q, scope)

    def walk_pattern(self, el: Element, prefix, q, scope):
        path = prefix + [el.tag]
        for c in el.children:
            if isinstance(c, Element):
                self.walk_pattern(c, path, q, scope)
            elif isinstance(c, VarRef):
                o = self.new_irp(path)
                self.emit_path(o, path, q)
                if c.name in scope:
                    self.add("whereRefCmp", scope[c.name][0], sym("equal"), o)
                else:
                    scope[c.name] = (o, path)
                    self.all_bindings[c.name] = o.value
            elif isinstance(c, Value):
                o = self.new_irp(path)
                self.emit_path(o, path, q)
                self.add("whereCmp", o, sym("equal"), _value_term(c))

    def compare(self, cond: CompareCondition, scope):
        op = sym("equal" if cond.op == "=" else "notequal")
        if cond.left.name not in scope:
            raise UnboundVariable(f"variable ${cond.left.name} is not bound",
                                  cond.left.line, cond.left.col)
        left = scope[cond.left.name][0]
        if isinstance(cond.right, VarRef):
            if cond.right.name not in scope:
                raise UnboundVariable(f"variable ${cond.right.name} is not bound",
                                      cond.right.line, cond.right.col)
            self.add("whereRefCmp", left, op, scope[cond.right.name][0])
        else:
            self.add("whereCmp", left, op, _value_term(cond.right))

    def construct(self, item, q, scope, prefix):
        if isinstance(item, VarRef):
            self.cons_ref(item, scope, prefix)
            return
        if isinstance(item, QueryNode):
            self.node(item, q, scope, prefix)
            return
        if isinstance(item, Element):
            path = prefix + [item.tag]
            for c in item.children:
                if isinstance(c, VarRef):
                    self.cons_ref(c, scope, path)
                elif isinstance(c, (Element, QueryNode)):
                    self.construct(c, q, scope, path)

    def cons_ref(self, v: VarRef, scope, path):
        if v.name not in scope:
            raise UnboundVariable(f"variable ${v.name} is not bound", v.line, v.col)
        o = scope[v.name][0]
        for i, tag in enumerate(path):
            self.add("consRef", o, string(tag), string(path_string(path[i + 1:])))


def emit_parser_facts(query) -> ParserFacts:
    """Translate a query (text or parsed) into low-level description facts."""
    if isinstance(query, str):
        query = parse_query(query)
    return _Emitter(query).run()
