"""From low-level query facts to the high-level description.

The rules below abstract parser facts into the predicates consulted by
selection rules (query, access, occurs, selects, joins, constructs). The
program is locally stratified, so together with facts and a domain
ontology it has exactly one answer set.
"""
from dataclasses import dataclass
from functools import lru_cache

from .errors import AmbiguousDescription, NoAnswerSet
from .logic.parser import parse_program
from .logic.solver import answer_sets
from .logic.terms import Program, facts_program, sorted_literals

QA_TEXT = r"""
% subpath completion
@qa1 subpath(O,T1,P1,T3,P3) :- subpath(O,T1,P1,T2,P2), subpath(O,T2,P2,T3,P3).
@qa2 subpath(O,T,P1,T2,P2) :- subpath(O,L,P1,T2,P2), synonym(L,T).
@qa3 subpath(O,T1,P1,T,P2) :- subpath(O,T1,P1,L,P2), synonym(L,T).

% projections
@qa4 has_source(Q) :- source(_,Q).
@qa5 is_sub_query(Q) :- sub_query(Q,_).

% candidates for independent queries
@qa6 iquery_cand(Q) :- query_cand(Q).
@qa7 iquery_cand(Q) :- is_sub_query(Q), source(Z,Q), db_name(Z).

% independent queries and their topmost query
@qa8 query(Q) :- top_query(Q,Q).
@qa9 top_query(Q,Q) :- iquery_cand(Q), not is_sub_query(Q).
@qa10 top_query(Q,Q) :- iquery_cand(Q), sub_query(Q,S), source(Z,S).
@qa11 top_query(S,Q) :- sub_query(S,Z), iquery_cand(S), top_query(Z,Q), not has_source(Z).
@qa12 top_query(S,Q) :- sub_query(S,Z), not iquery_cand(S), top_query(Z,Q).

% access, construction, occurrence, selection, joins
@qa13 access(O,T,P,Q) :- whereRef(O,T,P,S), class(T), top_query(S,Q).
@qa14 access(O,T,P,Q) :- whereRef(O,L,P,S), synonym(L,T), class(T), top_query(S,Q).
@qa15 constructs(O,T,P) :- consRef(O,T,P), class(T).
@qa16 constructs(O,T,P) :- consRef(O,L,P), synonym(L,T), class(T).
@qa17 has_constructs(O) :- consRef(O,T,P), class(T).
@qa18 has_constructs(O) :- consRef(O,L,P), synonym(L,T), class(T).
@qa19 constructs(O," "," ") :- consRef(O,_,_), not has_constructs(O).
@qa20 occurs(O,V) :- whereCmp(O,C,V).
@qa21 selects(O,C,V) :- whereCmp(O,C,V).
@qa22 joins(O1,O2,C) :- whereRefCmp(O1,C,O2).

% closure over joined reference points
@qa23 constructs(O1,T,P) :- joins(O1,O2,equal), constructs(O2,T,P).
@qa24 constructs(O2,T,P) :- joins(O1,O2,equal), constructs(O1,T,P).
@qa25 occurs(O1,V) :- joins(O1,O2,C), occurs(O2,V).
@qa26 occurs(O2,V) :- joins(O1,O2,C), occurs(O1,V).
@qa27 selects(O1,C,V) :- joins(O1,O2,equal), selects(O2,C,V).
@qa28 selects(O2,C,V) :- joins(O1,O2,equal), selects(O1,C,V).
@qa29 selects(O1,notequal,V) :- joins(O1,O2,notequal), selects(O2,equal,V).
@qa30 selects(O2,notequal,V) :- joins(O1,O2,notequal), selects(O1,equal,V).
"""

# Predicates of the query description vocabulary, as (name, arity).
PARSER_PREDICATES = frozenset({
    ("query_cand", 1), ("sub_query", 2), ("source", 2), ("db_name", 1),
    ("whereRef", 4), ("whereRefCmp", 3), ("whereCmp", 3), ("consRef", 3), ("subpath", 5),
})
HIGH_LEVEL_PREDICATES = frozenset({
    ("query", 1), ("access", 4), ("occurs", 2), ("selects", 3), ("joins", 3),
    ("constructs", 3), ("subpath", 5),
})
AUXILIARY_QA_PREDICATES = frozenset({
    ("has_source", 1), ("is_sub_query", 1), ("iquery_cand", 1), ("top_query", 2),
    ("has_constructs", 1),
})
QD_PREDICATES = PARSER_PREDICATES | HIGH_LEVEL_PREDICATES | AUXILIARY_QA_PREDICATES


@lru_cache(maxsize=1)
def qa_program() -> Program:
    return parse_program(QA_TEXT)


@dataclass(frozen=True)
class QueryDescription:
    facts: frozenset

    def high_level(self):
        """The high-level predicates only (subpath included, as completed)."""
        return frozenset(l for l in self.facts
                         if l.signature in HIGH_LEVEL_PREDICATES and l.predicate != "subpath")

    def of(self, name):
        return sorted_literals(l for l in self.facts if l.predicate == name)

    def qd_part(self):
        return frozenset(l for l in self.facts if l.signature in QD_PREDICATES)


def describe_query(facts, ontology: Program = Program(), qa: Program = None) -> QueryDescription:
    """Answer set of ontology + analysis rules + parser facts."""
    facts = getattr(facts, "facts", facts)
    prog = (qa or qa_program()) + ontology + facts_program(facts)
    sets = answer_sets(prog)
    if not sets:
        raise NoAnswerSet("query description has no answer set")
    if len(sets) > 1:
        raise AmbiguousDescription(f"query description has {len(sets)} answer sets")
    return QueryDescription(sets[0].literals)
