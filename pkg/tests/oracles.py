"""Independent reference implementations used by the tests.

Nothing here calls the solver or the preference module; the checks follow
the definitions directly and are only fit for tiny inputs.
"""
import itertools
import random

from selekta.logic.terms import Literal, Program, Rule


def literal_universe(p: Program):
    out = set()
    for r in p.rules:
        if r.head is not None:
            out.add(r.head)
        out.update(r.pos)
        out.update(r.neg)
    return sorted(out, key=lambda l: l.sort_key())


def reduct(p: Program, x):
    """Positive rules kept by the Gelfond-Lifschitz transformation."""
    return [(r.head, frozenset(r.pos)) for r in p.rules if not any(l in x for l in r.neg)]


def least_model(positive):
    m = set()
    changed = True
    while changed:
        changed = False
        for head, body in positive:
            if body <= m and head is not None and head not in m:
                m.add(head)
                changed = True
    return m


def violates_constraint(positive, x):
    return any(h is None and b <= x for h, b in positive)


def consistent(x):
    return not any(l.negated and l.complement() in x for l in x)


def brute_answer_sets(p: Program):
    """All consistent literal sets X with X = least model of the reduct of p by X."""
    lits = literal_universe(p)
    found = []
    for n in range(len(lits) + 1):
        for combo in itertools.combinations(lits, n):
            x = frozenset(combo)
            if not consistent(x):
                continue
            red = reduct(p, x)
            if least_model(red) == set(x) and not violates_constraint(red, x):
                found.append(x)
    return set(found)


def generating(p: Program, x):
    return [r for r in p.rules if r.head is not None
            and all(l in x for l in r.pos) and not any(l in x for l in r.neg)]


def permutation_preferred(p: Program, order, x):
    """Try every listing of the generating rules against P1-P3."""
    gr = generating(p, x)
    rules = [r for r in p.rules if r.head is not None]
    for perm in itertools.permutations(gr):
        pos = {r: i for i, r in enumerate(perm)}
        ok = True
        for i, r in enumerate(perm):
            earlier = {q.head for q in perm[:i]}
            if not set(r.pos) <= earlier:  # P1
                ok = False
                break
            for a, b in order:
                if a == r and b in pos and pos[b] > i:  # P2
                    ok = False
                    break
                if a == r and b not in pos and b in rules:  # P3
                    applicable = all(l in x for l in b.pos)
                    if applicable and not any(l in earlier for l in b.neg):
                        ok = False
                        break
            if not ok:
                break
        if ok:
            return True
    return False


def closure(pairs):
    rel = set(pairs)
    while True:
        extra = {(a, d) for a, b in rel for c, d in rel if b == c} - rel
        if not extra:
            return rel
        rel |= extra


# random ground programs over a handful of atoms

ATOMS = ("a", "b", "c", "d", "e")


def random_literal(rng, atoms=ATOMS, neg_rate=0.25):
    return Literal(rng.choice(atoms), (), rng.random() < neg_rate)


def random_program(rng, n_rules=None, atoms=ATOMS, constraints=True):
    n_rules = n_rules if n_rules is not None else rng.randint(1, 7)
    rules = []
    for _ in range(n_rules):
        head = random_literal(rng, atoms)
        if constraints and rng.random() < 0.1:
            head = None
        pos = tuple(random_literal(rng, atoms) for _ in range(rng.randint(0, 2)))
        neg = tuple(random_literal(rng, atoms) for _ in range(rng.randint(0, 2)))
        rules.append(Rule(head, pos, neg))
    return Program(tuple(dict.fromkeys(rules)))


def random_order(rng, rules, density=0.4):
    """Random strict partial order: edges follow one random permutation."""
    rules = list(rules)
    rng.shuffle(rules)
    pairs = {(rules[i], rules[j]) for i in range(len(rules)) for j in range(i + 1, len(rules))
             if rng.random() < density}
    return frozenset(closure(pairs))


def seeded(seed):
    return random.Random(seed)
