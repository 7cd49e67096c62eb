"""Priorities computed inside the logic program."""
import pytest

from selekta.logic.parser import parse_literal, parse_program
from selekta.logic.solver import answer_sets
from selekta.logic.terms import Program
from selekta.optimizer import max_level, optimal_among
from selekta.preference import is_preferred
from selekta.selection.base import SelectionBase
from selekta.selection.engine import evaluate_selection, project, selection_predicates
from selekta.selection.objlevel import compile_object_level, object_level_program, pref_pairs

from generators import running_dom, running_query_facts


def expected_pairs(rep):
    return {(rep.pq.names[a], rep.pq.names[b]) for a, b in rep.order}


def relevance_optimal(prog, rep):
    """Answer sets maximizing the set of derived rel atoms (the top weak level)."""
    top = max_level(Program((), rep.pq.weak)) + 1
    rel_only = Program(prog.rules, tuple(w for w in prog.weak if w.level == top))
    return [x for x, _ in optimal_among(rel_only, answer_sets(prog))]


@pytest.mark.parametrize("simplify", [True, False])
@pytest.mark.parametrize("which", ["running", "running_modified"])
def test_pref_facts_match_order(which, simplify, request):
    base, rq, rep = request.getfixturevalue(which)
    prog = object_level_program(base, rq, rep, simplify=simplify)
    xs = answer_sets(prog) if simplify else relevance_optimal(prog, rep)
    assert xs
    want = expected_pairs(rep)
    for x in xs:
        assert pref_pairs(x) == want
    preds = selection_predicates(base)
    got = {project(x, preds) for x in xs if is_preferred(prog, rep.order, x)}
    assert got == {project(c.answer_set, preds) for c in rep.candidates}


def test_running_pref_pair_and_rel(running):
    base, rq, rep = running
    xs = answer_sets(object_level_program(base, rq, rep))
    for x in xs:
        assert ("r1(q1,o2)", "r2(q1,o3)") in pref_pairs(x)
        assert parse_literal('rel("r2(q1,o3)")') in x


def test_simplification_default(running):
    base, rq, rep = running
    simple = compile_object_level(base, rq, rep)
    general = compile_object_level(base, rq, rep, simplify=False)
    assert not simple.weak
    assert len(general.weak) == len(rep.pq.rules)
    assert len(general.rules) > len(simple.rules)


def _actor_base(dom):
    return SelectionBase.from_programs(
        parse_program("source(s1). source(s2)."), dom,
        parse_program('@a(Q,O) query_source(s1,Q) :- access(O,"Actor",_,Q).\n'
                      '@b(Q,O) query_source(s2,Q) :- access(O,"Actor",_,Q).\n'
                      "#prefer a(Q,_) < b(Q,_)."))


def test_irrelevant_core_rules_get_no_pref_facts():
    base, rq = _actor_base(running_dom()), running_query_facts()
    rep = evaluate_selection(base, rq)
    core = {rep.pq.names[r] for r in rep.pq.of_kind("core")}
    for x in answer_sets(object_level_program(base, rq, rep)):
        assert not {p for p in pref_pairs(x) if p[0] in core or p[1] in core}


def test_no_access_facts_no_pref_facts():
    # without concepts there are no access facts, so nothing is relevant
    base, rq = _actor_base(Program()), running_query_facts()
    rep = evaluate_selection(base, rq)
    assert not rep.relevant
    for x in answer_sets(object_level_program(base, rq, rep)):
        assert pref_pairs(x) == set()
