"""Abstract syntax and parser for the supported XML-QL subset.

Supported: optional FUNCTION header, WHERE/CONSTRUCT blocks, element
patterns with variable or literal content, ``IN source($V)`` and
``IN $var`` sources, ``=``/``!=`` comparisons, and nested queries inside
CONSTRUCT templates. Tag variables, regular path expressions, attributes,
ELEMENT_AS / CONTENT_AS and ORDER-BY are rejected.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import List, Optional, Union

from ..errors import QuerySyntaxError, UnsupportedConstruct


@dataclass
class VarRef:
    name: str
    line: int = 0
    col: int = 0


@dataclass
class Value:
    value: Union[str, int]
    line: int = 0
    col: int = 0


@dataclass
class Element:
    tag: str
    children: list = field(default_factory=list)
    line: int = 0
    col: int = 0


@dataclass
class SourceRef:
    """``source($V)``; ``var`` is None for a literal document name."""
    var: Optional[str]
    name: Optional[str] = None


@dataclass
class PatternCondition:
    pattern: Element
    source: Union[SourceRef, VarRef]
    line: int = 0
    col: int = 0


@dataclass
class CompareCondition:
    left: VarRef
    op: str
    right: Union[VarRef, Value]
    line: int = 0
    col: int = 0


@dataclass
class QueryNode:
    where: List[Union[PatternCondition, CompareCondition]]
    construct: Union[Element, VarRef, None]
    line: int = 0
    col: int = 0

    def nested(self):
        """Directly nested query nodes, in document order."""
        out = []

        def walk(node):
            if isinstance(node, QueryNode):
                out.append(node)
            elif isinstance(node, Element):
                for c in node.children:
                    walk(c)

        if self.construct is not None:
            walk(self.construct)
        return out


@dataclass
class Query:
    name: Optional[str]
    params: dict
    body: QueryNode


_KEYWORDS = {"FUNCTION", "WHERE", "CONSTRUCT", "IN"}
_UNSUPPORTED_KEYWORDS = {"ELEMENT_AS", "CONTENT_AS", "ORDER-BY", "ORDER_BY", "ORDER"}

_TOKEN = re.compile(r"""
    (?P<ws>\s+|//[^\n]*|\#[^\n]*)
  | (?P<close></\s*(?P<ctag>[^\s>]*)\s*>)
  | (?P<open><(?=[^\s=])(?P<otag>[^>]*)>)
  | (?P<var>\$[A-Za-z_][A-Za-z0-9_]*)
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<number>-?\d+)
  | (?P<op>!=|<=|>=|=|<|>|[{}(),:])
  | (?P<word>[A-Za-z_][A-Za-z0-9_\-]*)
""", re.VERBOSE)

_TAG = re.compile(r"[A-Za-z_][A-Za-z0-9_\-]*")


class _Tok:
    __slots__ = ("kind", "text", "line", "col", "tag")

    def __init__(self, kind, text, line, col, tag=None):
        self.kind, self.text, self.line, self.col, self.tag = kind, text, line, col, tag


def _tokenize(text):
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if not m:
            raise QuerySyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        if kind in ("ctag", "otag"):
            kind = "close" if m.group("close") else "open"
        raw = m.group()
        if kind == "open":
            tag = m.group("otag").strip()
            _check_tag(tag, line, col, opening=True)
            toks.append(_Tok("open", raw, line, col, tag))
        elif kind == "close":
            tag = m.group("ctag").strip()
            if tag:
                _check_tag(tag, line, col, opening=False)
            toks.append(_Tok("close", raw, line, col, tag))
        elif kind != "ws":
            toks.append(_Tok(kind, raw, line, col))
        nl = raw.count("\n")
        if nl:
            line += nl
            line_start = pos + raw.rfind("\n") + 1
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


def _check_tag(tag, line, col, opening):
    if tag.startswith("$"):
        raise UnsupportedConstruct("tag variables are not supported", line, col)
    name = tag.split()[0] if tag.split() else ""
    if opening and name != tag:
        rest = tag[len(name):].strip()
        if rest == "/":
            raise UnsupportedConstruct("empty-element tags are not supported", line, col)
        raise UnsupportedConstruct("element attributes are not supported", line, col)
    if not _TAG.fullmatch(name):
        if any(ch in name for ch in ".|*+?()"):
            raise UnsupportedConstruct("regular path expressions are not supported", line, col)
        raise QuerySyntaxError(f"malformed tag {tag!r}", line, col, expected="element name")


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def error(self, expected, tok=None):
        tok = tok or self.tok
        found = tok.text or "end of input"
        return QuerySyntaxError(f"expected {expected}, found {found!r}", tok.line, tok.col, expected)

    def at_word(self, w):
        return self.tok.kind == "word" and self.tok.text == w

    def at_op(self, o):
        return self.tok.kind == "op" and self.tok.text == o

    def expect_op(self, o):
        if not self.at_op(o):
            raise self.error(repr(o))
        self.i += 1

    def expect_word(self, w):
        if not self.at_word(w):
            raise self.error(w)
        self.i += 1

    def unsupported_check(self):
        t = self.tok
        if t.kind == "word" and t.text.upper() in _UNSUPPORTED_KEYWORDS:
            raise UnsupportedConstruct(f"{t.text} is not supported", t.line, t.col)

    def query(self):
        name, params = None, {}
        wrapped = False
        if self.at_word("FUNCTION"):
            self.i += 1
            if self.tok.kind != "word":
                raise self.error("function name")
            name = self.tok.text
            self.i += 1
            self.expect_op("(")
            while True:
                if self.tok.kind != "var":
                    raise self.error("parameter variable")
                pname = self.tok.text[1:]
                self.i += 1
                dtd = None
                if self.at_op(":"):
                    self.i += 1
                    if self.tok.kind != "string":
                        raise self.error("DTD name")
                    dtd = self.tok.text[1:-1]
                    self.i += 1
                params[pname] = dtd
                if self.at_op(","):
                    self.i += 1
                    continue
                break
            self.expect_op(")")
            self.expect_op("{")
            wrapped = True
        body = self.query_node()
        if wrapped:
            self.expect_op("}")
        if self.tok.kind != "eof":
            raise self.error("end of input")
        return Query(name, params, body)

    def query_node(self):
        t = self.tok
        where = []
        if self.at_word("WHERE"):
            self.i += 1
            where.append(self.condition())
            while self.at_op(","):
                self.i += 1
                where.append(self.condition())
        self.unsupported_check()
        if not self.at_word("CONSTRUCT"):
            if not where:
                raise self.error("WHERE or CONSTRUCT")
            return QueryNode(where, None, t.line, t.col)  # pure selection
        self.i += 1
        construct = self.template()
        self.unsupported_check()
        return QueryNode(where, construct, t.line, t.col)

    def condition(self):
        t = self.tok
        self.unsupported_check()
        if t.kind == "open":
            pat = self.pattern()
            self.unsupported_check()
            if not self.at_word("IN"):
                raise self.error("IN")
            self.i += 1
            return PatternCondition(pat, self.source(), t.line, t.col)
        if t.kind == "var":
            left = VarRef(t.text[1:], t.line, t.col)
            self.i += 1
            op_tok = self.tok
            if op_tok.kind != "op" or op_tok.text not in ("=", "!=", "<", ">", "<=", ">="):
                raise self.error("comparison operator")
            if op_tok.text not in ("=", "!="):
                raise UnsupportedConstruct(f"comparison {op_tok.text!r} is not supported",
                                           op_tok.line, op_tok.col)
            self.i += 1
            r = self.tok
            if r.kind == "var":
                right = VarRef(r.text[1:], r.line, r.col)
            elif r.kind in ("string", "number"):
                right = self._value(r)
            else:
                raise self.error("variable or literal")
            self.i += 1
            return CompareCondition(left, op_tok.text, right, t.line, t.col)
        raise self.error("pattern or comparison")

    def _value(self, t):
        if t.kind == "number":
            return Value(int(t.text), t.line, t.col)
        return Value(re.sub(r"\\(.)", r"\1", t.text[1:-1]), t.line, t.col)

    def source(self):
        t = self.tok
        if self.at_word("source"):
            self.i += 1
            self.expect_op("(")
            v = self.tok
            if v.kind == "var":
                ref = SourceRef(v.text[1:])
            elif v.kind == "string":
                ref = SourceRef(None, v.text[1:-1])
            else:
                raise self.error("source variable")
            self.i += 1
            self.expect_op(")")
            return ref
        if t.kind == "var":
            self.i += 1
            return VarRef(t.text[1:], t.line, t.col)
        if t.kind == "string":
            self.i += 1
            return SourceRef(None, t.text[1:-1])
        raise self.error("source($var) or $var")

    def _close(self, open_tok):
        t = self.tok
        if t.kind != "close":
            raise self.error(f"</{open_tok.tag}>")
        if t.tag and t.tag != open_tok.tag:
            raise QuerySyntaxError(f"closing tag </{t.tag}> does not match <{open_tok.tag}>",
                                   t.line, t.col, expected=f"</{open_tok.tag}>")
        self.i += 1

    def pattern(self):
        o = self.tok
        self.i += 1
        el = Element(o.tag, [], o.line, o.col)
        while self.tok.kind != "close":
            t = self.tok
            if t.kind == "open":
                el.children.append(self.pattern())
            elif t.kind == "var":
                el.children.append(VarRef(t.text[1:], t.line, t.col))
                self.i += 1
            elif t.kind in ("string", "number"):
                el.children.append(self._value(t))
                self.i += 1
            else:
                self.unsupported_check()
                raise self.error(f"element content or </{o.tag}>")
        self._close(o)
        return el

    def template(self):
        t = self.tok
        if t.kind == "var":
            self.i += 1
            return VarRef(t.text[1:], t.line, t.col)
        if t.kind != "open":
            raise self.error("construct template")
        self.i += 1
        el = Element(t.tag, [], t.line, t.col)
        while self.tok.kind != "close":
            c = self.tok
            if c.kind == "open":
                el.children.append(self.template())
            elif c.kind == "var":
                el.children.append(VarRef(c.text[1:], c.line, c.col))
                self.i += 1
            elif c.kind in ("string", "number"):
                el.children.append(self._value(c))
                self.i += 1
            elif c.kind == "op" and c.text == "{":
                self.i += 1
                el.children.append(self.query_node())
                self.expect_op("}")
            else:
                self.unsupported_check()
                raise self.error(f"template content or </{t.tag}>")
        self._close(t)
        return el


def parse_query(text: str) -> Query:
    return _Parser(text).query()
