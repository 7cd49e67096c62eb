"""Text syntax for extended logic programs.

    @r1(Q,O) query_source(s2,Q) :- default_class(O,"Person",Q).
    -p(X) :- q(X), not r(X), X != a.
    :- p, not q.
    :~ query_source(S,Q), not covers(S,T,high). [5:1]
    #prefer r1(Q,_) < r3(Q,_,_,_).
    false :- not false, #count{S: query_source(S,Q)} > K, max_sources(K).

``%`` starts a comment. Identifiers starting with an upper-case letter or
``_`` are variables; each ``_`` is a fresh variable.
"""
import itertools
import re

from ..errors import ParseError
from .terms import (Comparison, Constant, CountAggregate, Label, Literal,
                    PreferenceDeclaration, Program, Rule, Variable, WeakConstraint)

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+|%[^\n]*)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<number>\d+)
  | (?P<op>:-|:~|<=|>=|!=|<>|≠|≤|≥|←|⇐|[=<>(),.:\[\]{};@\-¬])
  | (?P<directive>\#[a-z]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
""", re.VERBOSE)

_OP_ALIASES = {"<>": "!=", "≠": "!=", "≤": "<=", "≥": ">=", "←": ":-", "⇐": ":~", "¬": "-"}
_CMP = {"=", "!=", "<", "<=", ">", ">="}
_FLIP = {"<": ">", "<=": ">=", ">": "<", ">=": "<=", "=": "=", "!=": "!="}


class _Tok:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind, self.text, self.line, self.col = kind, text, line, col

    def __repr__(self):
        return f"{self.kind}:{self.text}@{self.line}:{self.col}"


def tokenize(text):
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        val = m.group()
        if kind != "ws":
            if kind == "op":
                val = _OP_ALIASES.get(val, val)
            toks.append(_Tok(kind, val, line, pos - line_start + 1))
        nl = val.count("\n") if kind == "ws" else 0
        if nl:
            line += nl
            line_start = pos + m.group().rfind("\n") + 1
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


def _unescape(s):
    return re.sub(r"\\(.)", lambda m: m.group(1), s[1:-1])


class _Parser:
    def __init__(self, text):
        self.toks = tokenize(text)
        self.i = 0
        self.fresh = itertools.count(1)

    @property
    def tok(self):
        return self.toks[self.i]

    def peek(self, k=1):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        return ParseError(msg, tok.line, tok.col)

    def accept(self, text):
        if self.tok.text == text and self.tok.kind in ("op", "directive", "ident"):
            self.i += 1
            return True
        return False

    def expect(self, text):
        if not self.accept(text):
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")

    # terms

    def term(self):
        t = self.tok
        if t.kind == "number":
            self.i += 1
            return Constant(int(t.text))
        if t.kind == "op" and t.text == "-" and self.peek().kind == "number":
            self.i += 2
            return Constant(-int(self.toks[self.i - 1].text))
        if t.kind == "string":
            self.i += 1
            return Constant(_unescape(t.text), True)
        if t.kind == "ident":
            self.i += 1
            if t.text == "_":
                return Variable(f"_{next(self.fresh)}")
            if t.text[0].isupper() or t.text[0] == "_":
                return Variable(t.text)
            return Constant(t.text)
        raise self.error(f"expected a term, found {t.text or 'end of input'!r}")

    def term_list(self):
        self.expect("(")
        args = [self.term()]
        while self.accept(","):
            args.append(self.term())
        self.expect(")")
        return tuple(args)

    def literal(self):
        neg = self.accept("-")
        t = self.tok
        if t.kind != "ident" or t.text[0].isupper() or t.text[0] == "_":
            raise self.error(f"expected a predicate name, found {t.text or 'end of input'!r}")
        if t.text == "not":
            raise self.error("'not' cannot be used as a predicate name")
        self.i += 1
        args = self.term_list() if self.tok.text == "(" else ()
        return Literal(t.text, args, neg)

    # bodies

    def aggregate(self, left_guard=None):
        self.expect("#count")
        self.expect("{")
        terms = [self.term()]
        while self.accept(","):
            terms.append(self.term())
        self.expect(":")
        conds = [self.literal()]
        while self.accept(","):
            conds.append(self.literal())
        self.expect("}")
        guards = []
        if left_guard:
            guards.append(left_guard)
        if self.tok.kind == "op" and self.tok.text in _CMP:
            op = self.tok.text
            self.i += 1
            guards.append((op, self.term()))
        if not guards:
            raise self.error("aggregate needs a comparison guard")
        for op, _ in guards:
            if op == "!=":
                raise self.error("'!=' is not supported as an aggregate guard")
        return CountAggregate(tuple(terms), tuple(conds), tuple(guards))

    def body(self):
        pos, neg, builtins, aggs = [], [], [], []
        while True:
            t = self.tok
            if t.kind == "ident" and t.text == "not" and self.peek().text != "(":
                self.i += 1
                neg.append(self.literal())
            elif t.kind == "directive" and t.text == "#count":
                aggs.append(self.aggregate())
            elif self._starts_comparison():
                left = self.term()
                op = self.tok.text
                self.i += 1
                if self.tok.text == "#count":
                    aggs.append(self.aggregate((_FLIP[op], left)))
                else:
                    builtins.append(Comparison(op, left, self.term()))
            else:
                pos.append(self.literal())
            if not self.accept(","):
                break
        return pos, neg, builtins, aggs

    def _starts_comparison(self):
        t, nxt = self.tok, self.peek()
        if t.kind in ("number", "string"):
            return True
        if t.kind == "op" and t.text == "-" and nxt.kind == "number":
            return True
        if t.kind == "ident" and (t.text[0].isupper() or t.text[0] == "_"):
            return True
        return t.kind == "ident" and nxt.kind == "op" and nxt.text in _CMP

    # statements

    def label(self):
        self.expect("@")
        t = self.tok
        if t.kind != "ident":
            raise self.error("expected a label name")
        self.i += 1
        args = self.term_list() if self.tok.text == "(" else ()
        return Label(t.text, args)

    def label_pattern(self):
        t = self.tok
        if t.kind != "ident" or t.text[0].isupper():
            raise self.error("expected a rule label")
        self.i += 1
        args = self.term_list() if self.tok.text == "(" else ()
        return Label(t.text, args)

    def statement(self, rules, weak, prefs):
        if self.accept("#prefer"):
            first = self.label_pattern()
            if self.accept("<"):
                lower, higher = first, self.label_pattern()
            else:
                self.expect(">")
                higher, lower = first, self.label_pattern()
            self.expect(".")
            prefs.append(PreferenceDeclaration(lower, higher))
            return
        if self.accept(":~"):
            pos, neg, builtins, aggs = self.body()
            if aggs:
                raise self.error("aggregates are not allowed in weak constraints")
            self.expect(".")
            weight, level = 1, 1
            if self.accept("["):
                weight = self._positive_int()
                if self.accept(":"):
                    level = self._positive_int()
                self.expect("]")
            weak.append(WeakConstraint(tuple(pos), tuple(neg), tuple(builtins), weight, level))
            return
        label = self.label() if self.tok.text == "@" else None
        head = None
        if self.tok.text != ":-":
            head = self.literal()
        pos, neg, builtins, aggs = [], [], [], []
        if self.accept(":-"):
            pos, neg, builtins, aggs = self.body()
        elif head is None:
            raise self.error("expected a rule")
        self.expect(".")
        rules.append(Rule(head, tuple(pos), tuple(neg), tuple(builtins), tuple(aggs), label))

    def _positive_int(self):
        t = self.tok
        if t.kind != "number" or int(t.text) < 1:
            raise self.error("weights and levels must be positive integers")
        self.i += 1
        return int(t.text)

    def program(self):
        rules, weak, prefs = [], [], []
        while self.tok.kind != "eof":
            self.statement(rules, weak, prefs)
        return Program(tuple(rules), tuple(weak), tuple(prefs))


def parse_program(text: str) -> Program:
    """Parse program text into a Program; raises ParseError with line and column."""
    return _Parser(text).program()


def parse_literal(text: str) -> Literal:
    p = _Parser(text)
    l = p.literal()
    if p.tok.kind != "eof":
        raise p.error("trailing input after literal")
    return l


def parse_rule(text: str) -> Rule:
    prog = parse_program(text)
    if len(prog.rules) != 1 or prog.weak or prog.preferences:
        raise ParseError("expected exactly one rule")
    return prog.rules[0]
