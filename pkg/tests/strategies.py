"""Hypothesis strategies for ground programs."""
from hypothesis import strategies as st

from selekta.logic.terms import Literal, Program, Rule

from oracles import ATOMS

literals = st.builds(Literal, st.sampled_from(ATOMS), st.just(()), st.booleans())
_bodies = st.lists(literals, max_size=2).map(tuple)


@st.composite
def ground_rules(draw, constraints=True):
    head = draw(st.one_of(literals, st.none()) if constraints else literals)
    pos, neg = draw(_bodies), draw(_bodies)
    if head is None and not pos and not neg:
        pos = (draw(literals),)
    return Rule(head, pos, neg)


@st.composite
def ground_programs(draw, max_rules=7, constraints=True):
    rules = draw(st.lists(ground_rules(constraints), min_size=0, max_size=max_rules))
    return Program(tuple(dict.fromkeys(rules)))
