"""Weak-constraint optimization.

The weight vector of an interpretation lists, from the highest level down
to level 1, the summed weights of violated ground weak constraints. Optimal
answer sets have the lexicographically smallest vector.
"""
from .logic.grounding import ground_program
from .logic.solver import answer_sets
from .logic.terms import Program


def max_level(p: Program) -> int:
    return max((w.level for w in p.weak), default=0)


def weight_vector(p: Program, x, levels=None) -> tuple:
    """Weights per level, highest level first; length is the maximum level."""
    g = ground_program(p)
    x = getattr(x, "literals", x)
    top = levels if levels is not None else max_level(g)
    sums = [0] * top
    for w in g.weak:
        if w.violated(x):
            sums[top - w.level] += w.weight
    return tuple(sums)


def scalar_objective(p: Program, x) -> int:
    """Single number ordering answer sets the same way as the weight vectors."""
    g = ground_program(p)
    x = getattr(x, "literals", x)
    base = 1 + sum(w.weight for w in g.weak)
    return sum(w.weight * base ** (w.level - 1) for w in g.weak if w.violated(x))


def optimal_among(p: Program, candidates):
    """Candidates with minimal weight vector, each paired with its vector."""
    g = ground_program(p)
    scored = [(weight_vector(g, x), x) for x in candidates]
    if not scored:
        return []
    best = min(v for v, _ in scored)
    return [(x, v) for v, x in scored if v == best]


def optimal_answer_sets(p: Program):
    g = ground_program(p)
    return optimal_among(g, answer_sets(g))


def format_weights(v) -> str:
    return "(" + ",".join(str(n) for n in v) + ")"
