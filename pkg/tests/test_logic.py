"""Terms, parser, grounding and the answer-set solver."""
import pytest
from hypothesis import given, settings, strategies as st

from selekta.analysis import qa_program
from selekta.errors import ParseError, UnsafeRule
from selekta.logic.grounding import ground_program
from selekta.logic.parser import parse_literal, parse_program, parse_rule
from selekta.logic.solver import (answer_sets, generating_rules, gl_reduct, is_answer_set,
                                  is_consistent, is_locally_stratified, minimal_model)
from selekta.logic.terms import Program, Rule, integer, string, sym

from oracles import brute_answer_sets
from strategies import ground_programs, literals

TOY = "s :- not t. n. t :- n, not s. w :- t."


def lits(*names):
    return frozenset(parse_literal(n) for n in names)


def rules(text):
    return set(parse_program(text).rules)


# terms

def test_complement_is_involution():
    l = parse_literal('p(a,"B",3)')
    assert l.complement().negated
    assert l.complement().complement() == l


@given(literals)
def test_complement_involution_property(l):
    assert l.complement().complement() == l
    assert l.complement() != l


def test_constants_distinguish_kinds():
    assert sym("a") != string("a")
    assert integer(3) != string("3")
    assert str(string("a b")) == '"a b"'


# parser

def test_parse_rule_parts():
    r = parse_rule('@r(X) -p(X,"a b",3) :- q(X), not r(X), X != b.')
    assert r.head.negated and r.head.predicate == "p"
    assert r.head.args[1:] == (string("a b"), integer(3))
    assert [str(l) for l in r.pos] == ["q(X)"]
    assert [str(l) for l in r.neg] == ["r(X)"]
    assert str(r.builtins[0]) == "X != b"
    assert str(r.label) == "r(X)"


def test_weak_constraint_and_preference_syntax():
    p = parse_program(":~ p(X), not q(X). [2:3]\n#prefer r(a) > r(b).\n#prefer s < t.")
    w = p.weak[0]
    assert (w.weight, w.level) == (2, 3)
    assert [(str(d.lower), str(d.higher)) for d in p.preferences] == [("r(b)", "r(a)"), ("s", "t")]


def test_weak_constraint_defaults_to_unit_weight():
    w = parse_program(":~ p.").weak[0]
    assert (w.weight, w.level) == (1, 1)


def test_round_trip():
    text = ('@r(X) -p(X,"a b",3) :- q(X), not r(X), X != b.\n'
            ':- p(X,Y,Z), not q(X).\n'
            ':~ p(X,_,_). [2:3]\n'
            '#prefer r(b) < r(a).')
    p = parse_program(text)
    assert parse_program(str(p)) == p


@given(ground_programs())
def test_round_trip_ground(p):
    assert parse_program(str(p)).rules == p.rules


@pytest.mark.parametrize("text,line,col", [
    ("p(X) :- .", 1, 9),
    ("p(a", 1, 4),
    ("a.\n  P(a).", 2, 3),
    (":~ a. [0:1]", 1, 8),
])
def test_parse_errors_carry_position(text, line, col):
    with pytest.raises(ParseError) as e:
        parse_program(text)
    assert (e.value.line, e.value.col) == (line, col)


def test_comments_are_ignored():
    assert parse_program("% nothing\np. % trailing\n").facts == lits("p")


# grounding

def test_structural_grounding_drops_equal_pairs():
    p = parse_program("""
        source(s1). source(s2). query(q1).
        qs(S,Q) :- source(S), query(Q), not -qs(S,Q).
        -qs(S,Q) :- qs(S2,Q), source(S), S != S2.
    """)
    g = ground_program(p)
    neg = [r for r in g.rules if r.head is not None and r.head.negated]
    assert {(str(r.head), str(r.pos[0])) for r in neg} == {
        ("-qs(s1,q1)", "qs(s2,q1)"), ("-qs(s2,q1)", "qs(s1,q1)")}
    assert all(not r.builtins for r in g.rules)


def test_ground_fact_and_ground_rule_unchanged():
    p = parse_program("n. w :- t.")
    assert ground_program(p) == p


def test_unsafe_rules_rejected():
    for text in ("p(X) :- not q(X).", "p(X).", ":- not q(X).", "p(X) :- q(Y), X != Y."):
        with pytest.raises(UnsafeRule):
            ground_program(parse_program(text + " q(a)."))


def test_equality_binds_variables():
    g = ground_program(parse_program("q(a). p(X,Y) :- q(X), Y = X."))
    assert any(r.head == parse_literal("p(a,a)") for r in g.rules)


# reduct and minimal models

def test_reduct_of_toy_program():
    p = parse_program(TOY)
    assert set(gl_reduct(p, lits("n", "t", "w")).rules) == rules("n. t :- n. w :- t.")
    assert set(gl_reduct(p, lits("s", "n")).rules) == rules("s. n. w :- t.")


def test_reduct_of_positive_program_is_identity():
    p = parse_program("a. b :- a. c :- a, b.")
    assert set(gl_reduct(p, lits("zzz")).rules) == set(p.rules)


def test_minimal_model():
    p = parse_program("n. t :- n. w :- t.")
    model, violated = minimal_model(p)
    assert model == lits("n", "t", "w") and not violated
    assert model != lits("n", "t", "w", "s")
    assert minimal_model(Program())[0] == frozenset()


# answer sets

def test_toy_answer_sets():
    found = {x.literals for x in answer_sets(parse_program(TOY))}
    assert found == {lits("n", "t", "w"), lits("s", "n")}


def test_empty_program_has_empty_answer_set():
    assert [x.literals for x in answer_sets(Program())] == [frozenset()]


def test_even_loop():
    assert {x.literals for x in answer_sets(parse_program("p :- not q. q :- not p."))} == {
        lits("p"), lits("q")}


def test_strong_negation_inconsistency_kills_answer_set():
    assert answer_sets(parse_program("a. -a.")) == []
    assert {x.literals for x in answer_sets(parse_program("a :- not -a. -a :- not a."))} == {
        lits("a"), lits("-a")}


def test_constraints():
    assert {x.literals for x in answer_sets(parse_program("p :- not q. q :- not p. :- p."))} == {
        lits("q")}


def test_generating_rules_of_toy():
    p = parse_program(TOY)
    assert set(generating_rules(p, lits("n", "t", "w"))) == rules("n. t :- n, not s. w :- t.")
    assert set(generating_rules(p, lits("s", "n"))) == rules("s :- not t. n.")
    assert generating_rules(Program(), frozenset()) == frozenset()


def test_answer_set_order_is_deterministic():
    p = parse_program(TOY)
    assert [str(x) for x in answer_sets(p)] == [str(x) for x in answer_sets(parse_program(TOY))]


@settings(max_examples=300, deadline=None)
@given(ground_programs())
def test_solver_matches_brute_force(p):
    found = answer_sets(p)
    assert {x.literals for x in found} == brute_answer_sets(p)
    for x in found:
        assert is_consistent(x.literals)
        assert is_answer_set(p, x.literals)
        # every answer set is a model of the program
        for r in p.rules:
            if r.body_true(x.literals):
                assert r.head is not None and r.head in x.literals


@settings(max_examples=200, deadline=None)
@given(ground_programs(constraints=False))
def test_stratified_programs_have_at_most_one_answer_set(p):
    if is_locally_stratified(p):
        assert len(answer_sets(p)) <= 1


@settings(max_examples=100, deadline=None)
@given(ground_programs(), st.sets(literals))
def test_reduct_only_removes_rules(p, x):
    red = gl_reduct(p, x)
    assert len(red.rules) <= len(p.rules)
    heads = {r.head for r in p.rules}
    assert all(r.head in heads and not r.neg for r in red.rules)


# local stratification

def test_qa_program_is_locally_stratified():
    assert is_locally_stratified(qa_program())


def test_even_loop_not_stratified():
    assert not is_locally_stratified(parse_program("p :- not q. q :- not p."))


def test_facts_are_stratified():
    assert is_locally_stratified(parse_program("a. b. c(x)."))


def test_rule_heads_and_facts():
    r = Rule(parse_literal("a"))
    assert r.is_fact and not r.is_constraint
