"""XML-QL front end and query description."""
from pathlib import Path

import pytest

from selekta.analysis import describe_query, qa_program
from selekta.corpus import corpus_dir, load_running
from selekta.errors import QuerySyntaxError, UnboundVariable, UnsupportedConstruct
from selekta.logic.parser import parse_literal, parse_program
from selekta.xmlql.facts import emit_parser_facts
from selekta.xmlql.syntax import CompareCondition, PatternCondition, parse_query

GOLDEN = Path(__file__).parent / "golden"


def golden(name):
    return parse_program((GOLDEN / name).read_text(encoding="utf-8")).facts


def hitchcock():
    return parse_query(load_running()[1])


def running_ontology():
    return parse_program((corpus_dir() / "running" / "dom.elp").read_text(encoding="utf-8"))


def test_hitchcock_ast_shape():
    q = hitchcock()
    assert q.name == "HitchcockMovies"
    assert q.body.construct.tag == "MovieList"
    inner = q.body.nested()
    assert len(inner) == 1
    assert inner[0].where[0].source.var == "MovieDB"


def test_example_query_ast():
    q = parse_query((GOLDEN / "example_query.xmlql").read_text())
    pats = [c for c in q.body.where if isinstance(c, PatternCondition)]
    cmps = [c for c in q.body.where if isinstance(c, CompareCondition)]
    assert len([p for p in pats if p.pattern.tag == "MovieDB"]) == 2
    assert [c.op for c in cmps] == ["!="]


def test_low_level_facts_golden():
    got = emit_parser_facts(hitchcock()).facts
    want = golden("hitchcock_low.elp")
    assert len(want) == 31
    assert set(got) == want


def test_o3_chain():
    facts = emit_parser_facts(hitchcock()).facts
    o3 = {l for l in facts if l.args and str(l.args[0]) == "o3"}
    assert len(o3) == 10  # five whereRef, four subpath, one whereCmp
    assert parse_literal('whereCmp(o3,equal,"Hitchcock")') in o3


def test_single_pattern_without_construct():
    rq = emit_parser_facts(parse_query('FUNCTION f($d:"x.dtd") { WHERE <A> $x </A> IN source($d) }'))
    assert parse_literal('whereRef(o1,"A"," ",q1)') in rq.facts
    assert {l.predicate for l in rq.facts} == {"whereRef", "query_cand", "source", "db_name"}


def test_naming_is_deterministic():
    assert emit_parser_facts(hitchcock()).sorted() == emit_parser_facts(hitchcock()).sorted()


def test_chain_invariants():
    facts = emit_parser_facts(hitchcock()).facts
    refs = {}
    for l in facts:
        if l.predicate == "whereRef":
            refs.setdefault(l.args[0], 0)
            refs[l.args[0]] += 1
    for l in facts:
        if l.predicate == "whereCmp":
            assert l.args[0] in refs
    for o, n in refs.items():
        assert sum(1 for l in facts if l.predicate == "subpath" and l.args[0] == o) == n - 1


def test_shared_variables_and_inequality_make_comparisons():
    rq = emit_parser_facts(parse_query((GOLDEN / "example_query.xmlql").read_text()))
    assert parse_literal("whereRefCmp(o1,notequal,o3)") in rq.facts
    assert parse_literal("whereRefCmp(o2,equal,o4)") in rq.facts


@pytest.mark.parametrize("text,error", [
    ("", QuerySyntaxError),
    ('FUNCTION f($d:"x") { WHERE <A> $x </B> IN source($d) CONSTRUCT <B> $x </B> }',
     QuerySyntaxError),
    ('FUNCTION f($d:"x") { WHERE <A> $x </A> ELEMENT_AS $e IN source($d) '
     'CONSTRUCT <B> $x </B> }', UnsupportedConstruct),
])
def test_parse_errors(text, error):
    with pytest.raises(error) as e:
        parse_query(text)
    assert e.value.line >= 1


def test_unbound_construct_variable():
    q = parse_query('FUNCTION f($d:"x") { WHERE <A> $x </A> IN source($d) CONSTRUCT <B> $y </B> }')
    with pytest.raises(UnboundVariable):
        emit_parser_facts(q)


# query description

def test_qa_program_shape():
    qa = qa_program()
    texts = {str(r) for r in qa.rules}
    assert "@qa8 query(Q) :- top_query(Q,Q)." in texts
    assert any(r.label.name == "qa2" and "synonym" in str(r) and r.head.predicate == "subpath"
               for r in qa.rules)


def test_high_level_golden():
    qd = describe_query(emit_parser_facts(hitchcock()), running_ontology())
    assert set(qd.high_level()) == golden("hitchcock_high.elp")


def test_trace_facts_present():
    qd = describe_query(emit_parser_facts(hitchcock()), running_ontology())
    for f in ("iquery_cand(q2)", "top_query(q2,q1)", "top_query(q1,q1)"):
        assert parse_literal(f) in qd.facts
    assert not qd.of("has_source") or parse_literal("has_source(q1)") not in qd.facts


def test_no_access_for_non_concepts():
    qd = describe_query(emit_parser_facts(hitchcock()), running_ontology())
    classes = {l.args[0] for l in running_ontology().facts if l.predicate == "class"}
    assert all(l.args[1] in classes for l in qd.of("access"))
    assert not any(str(l.args[1]) == '"Personalia"' for l in qd.of("access"))


def test_join_closure():
    rq = emit_parser_facts(parse_query((GOLDEN / "costars.xmlql").read_text()))
    qd = describe_query(rq, running_ontology())
    assert parse_literal("joins(o1,o3,equal)") in qd.facts
    assert parse_literal('selects(o3,notequal,"Grant")') in qd.facts
    assert parse_literal('occurs(o3,"Grant")') in qd.facts


def test_description_is_deterministic():
    rq = emit_parser_facts(hitchcock())
    assert describe_query(rq, running_ontology()) == describe_query(rq, running_ontology())
