"""Rule orders and preferred answer sets."""
import pytest
from hypothesis import given, settings, strategies as st

from selekta.errors import ArityMismatch, NotStrictPartialOrder, UnknownLabel
from selekta.logic.grounding import ground_program
from selekta.logic.parser import parse_literal, parse_program
from selekta.logic.solver import answer_sets, generating_rules
from selekta.preference import (check_strict_partial_order, ground_user_order, is_preferred,
                                preferred_answer_sets, transitive_closure)

from oracles import (closure, generating, permutation_preferred, random_order, random_program,
                     seeded)
from strategies import ground_programs

TOY = "s :- not t. n. t :- n, not s. w :- t."


def by_label(rules):
    return {str(r.label): r for r in rules if r.label is not None}


def test_user_order_from_running_example_declaration():
    p = parse_program("""
        @r1(q1,o2) a. @r1(q1,o3) b. @r3(q1,s1,o3,"Director") c. @r3(q2,s1,o3,"Director") d.
        #prefer r1(Q,_) < r3(Q,_,_,_).
    """)
    names = by_label(p.rules)
    got = ground_user_order(p.preferences, p.rules)
    want = {(names["r1(q1,o2)"], names['r3(q1,s1,o3,"Director")']),
            (names["r1(q1,o3)"], names['r3(q1,s1,o3,"Director")'])}
    assert got == want


def test_empty_declarations_give_empty_order():
    assert ground_user_order((), parse_program("@r(a) a.").rules) == frozenset()


def test_cyclic_declarations_rejected():
    p = parse_program("@a(x) p. @b(x) q. #prefer a(X) < b(X). #prefer b(X) < a(X).")
    with pytest.raises(NotStrictPartialOrder):
        ground_user_order(p.preferences, p.rules)


def test_unknown_label_and_arity():
    p = parse_program("@a(x) p.")
    with pytest.raises(UnknownLabel):
        ground_user_order(parse_program("#prefer a(X) < zz(X).").preferences, p.rules)
    with pytest.raises(ArityMismatch):
        ground_user_order(parse_program("#prefer a(X,Y) < a(Y).").preferences, p.rules)


def test_strict_partial_order_check():
    assert check_strict_partial_order({(1, 2), (2, 3)}) == {(1, 2), (2, 3), (1, 3)}
    with pytest.raises(NotStrictPartialOrder):
        check_strict_partial_order({(1, 2), (2, 1)})
    with pytest.raises(NotStrictPartialOrder):
        check_strict_partial_order({(1, 1)})


@given(st.sets(st.tuples(st.integers(0, 5), st.integers(0, 5)), max_size=12))
def test_transitive_closure_matches_oracle(pairs):
    assert set(transitive_closure(pairs)) == closure(pairs)


def test_empty_order_keeps_toy_answer_sets():
    p = parse_program(TOY)
    assert len(preferred_answer_sets(p, frozenset())) == 2


def test_order_filters_answer_set():
    # prefer the rule deriving s: the answer set applying t's rule is rejected
    p = ground_program(parse_program("@rs s :- not t. n. @rt t :- n, not s. w :- t."))
    names = by_label(p.rules)
    order = {(names["rt"], names["rs"])}
    kept = [x.literals for x in preferred_answer_sets(p, order)]
    assert kept == [frozenset({parse_literal("s"), parse_literal("n")})]


def test_lower_rule_feeding_higher_rule_is_not_preferred():
    # the higher rule needs the head of the lower one, so no listing satisfies both P1 and P2
    p = ground_program(parse_program("@lo a. @hi b :- a."))
    names = by_label(p.rules)
    x = answer_sets(p)[0]
    order = {(names["lo"], names["hi"])}
    assert not is_preferred(p, order, x)
    assert not permutation_preferred(p, order, x.literals)


def test_generating_rules_agree_with_oracle():
    p = parse_program(TOY)
    for x in answer_sets(p):
        assert set(generating_rules(p, x.literals)) == set(generating(p, x.literals))


@settings(max_examples=300, deadline=None)
@given(ground_programs(constraints=False), st.randoms(use_true_random=False),
       st.floats(0.1, 0.9))
def test_is_preferred_matches_permutation_oracle(p, rng, density):
    order = random_order(rng, [r for r in p.rules if r.head is not None], density)
    for x in answer_sets(p):
        if len(generating(p, x.literals)) <= 7:
            assert is_preferred(p, order, x) == permutation_preferred(p, order, x.literals)


@settings(max_examples=100, deadline=None)
@given(ground_programs(constraints=False))
def test_empty_order_is_vacuous(p):
    # every answer set has a listing satisfying P1 alone
    assert len(preferred_answer_sets(p, frozenset())) == len(answer_sets(p))


def test_preferred_is_a_filter():
    for seed in range(50):
        rng = seeded(seed)
        p = random_program(rng, constraints=False)
        order = random_order(rng, [r for r in p.rules if r.head is not None])
        all_sets = {x.literals for x in answer_sets(p)}
        assert {x.literals for x in preferred_answer_sets(p, order)} <= all_sets
