"""Command line: ``selekta solve|describe|select|explain``.

Exit codes: 0 on success, 1 when a valid run yields no answer set or no
selection, 2 on usage, parse and validation errors.
"""
import argparse
import sys
from pathlib import Path

from .analysis import describe_query
from .errors import (AmbiguousDescription, NoAnswerSet, NoSelectionInput, ParseError,
                     SelektaError)
from .logic.grounding import ground_program
from .logic.parser import parse_program
from .logic.solver import answer_sets
from .logic.terms import format_literal_set, sorted_literals
from .optimizer import format_weights, optimal_among, weight_vector
from .preference import ground_user_order, is_preferred
from .selection.base import QUERY_SOURCE, load_base
from .selection.engine import evaluate_selection, format_relation
from .xmlql.facts import emit_parser_facts
from .xmlql.syntax import parse_query

EXIT_OK, EXIT_EMPTY, EXIT_ERROR = 0, 1, 2


class _Failure(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _read(path):
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise _Failure(EXIT_ERROR, f"cannot read {path}: {e.strerror}")


def _parse(fn, text, path):
    try:
        return fn(text)
    except ParseError as e:
        raise _Failure(EXIT_ERROR, f"{path}:{e}")


def cmd_solve(args, out):
    prog = _parse(parse_program, _read(args.program), args.program)
    g = ground_program(prog)
    found = answer_sets(g)
    if args.prefs and g.preferences:
        order = ground_user_order(g.preferences, g.rules)
        found = [x for x in found if is_preferred(g, order, x)]
    if not found:
        out.write("no answer set\n")
        return EXIT_EMPTY
    if args.opt:
        levels = max((w.level for w in g.weak), default=0)
        chosen = ([(x, weight_vector(g, x, levels)) for x in found] if args.all
                  else optimal_among(g, found))
        for x, v in chosen:
            out.write(f"{x} weights={format_weights(v)}\n")
    else:
        for x in found:
            out.write(f"{x}\n")
    return EXIT_OK


def _facts_lines(lits):
    return sorted(f"{l}." for l in lits)


def cmd_describe(args, out):
    query = _parse(parse_query, _read(args.query), args.query)
    ontology = _parse(parse_program, _read(args.ontology), args.ontology)
    rq = emit_parser_facts(query)
    qd = describe_query(rq.facts, ontology)
    out.write("# low-level\n")
    for line in _facts_lines(rq.facts):
        out.write(line + "\n")
    out.write("# high-level\n")
    for line in _facts_lines(qd.high_level()):
        out.write(line + "\n")
    return EXIT_OK


def _selected(x):
    return [l for l in sorted_literals(x.literals) if l.signature == QUERY_SOURCE and not l.negated]


def _write_explain(rep, out):
    names = rep.pq.names
    out.write(f"# selection inputs: {len(rep.inputs)}\n")
    out.write("# relevant rules\n")
    for n in sorted(names[r] for r in rep.relevant):
        out.write(n + "\n")
    for title, rel in (("context order", rep.ctx), ("user order", rep.user),
                       ("joined order", rep.joined), ("final order", rep.order)):
        out.write(f"# {title}\n")
        for line in format_relation(rel, names):
            out.write(line + "\n")
    for title, items in (("candidates", rep.candidates), ("best", rep.best)):
        out.write(f"# {title}\n")
        for c in items:
            out.write(f"{format_literal_set(_selected(c.answer_set))} "
                      f"weights={format_weights(c.weights)} input={c.input_index + 1}\n")


def cmd_select(args, out):
    try:
        base = load_base(args.manifest)
    except OSError as e:
        raise _Failure(EXIT_ERROR, f"cannot read {args.manifest}: {e.strerror}")
    query = _parse(parse_query, _read(args.query), args.query)
    if args.max_sources is not None and args.max_sources < 1:
        raise _Failure(EXIT_ERROR, "--max-sources must be at least 1")
    rep = evaluate_selection(base, emit_parser_facts(query), args.max_sources)
    if args.explain:
        _write_explain(rep, out)
        out.write("# selection\n")
    chosen = rep.selections()
    any_source = False
    for q, sources in chosen.items():
        prefix = "" if len(chosen) == 1 else f"{q} "
        if sources:
            any_source = True
            out.write(prefix + "source: " + ", ".join(str(s) for s in sources) + "\n")
        else:
            out.write(prefix + "no-selection\n")
    if not chosen:
        out.write("no-selection\n")
    return EXIT_OK if any_source else EXIT_EMPTY


def build_parser():
    p = argparse.ArgumentParser(prog="selekta", description="Rule-based information source selection.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="print the answer sets of a program")
    s.add_argument("program")
    s.add_argument("--opt", action="store_true", help="apply weak constraints, print weights")
    s.add_argument("--all", action="store_true", help="with --opt, print every answer set")
    s.add_argument("--prefs", action="store_true", help="keep answer sets preferred under #prefer")
    s.set_defaults(func=cmd_solve)

    d = sub.add_parser("describe", help="print the facts describing a query")
    d.add_argument("query")
    d.add_argument("ontology")
    d.set_defaults(func=cmd_describe)

    for name, explain in (("select", False), ("explain", True)):
        c = sub.add_parser(name, help="choose a source for a query" if not explain
                           else "select, and dump relevance, orders and candidates")
        c.add_argument("manifest")
        c.add_argument("query")
        c.add_argument("--max-sources", type=int, metavar="K")
        if not explain:
            c.add_argument("--explain", action="store_true")
        c.set_defaults(func=cmd_select, explain=explain)
    return p


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code else EXIT_OK
    try:
        return args.func(args, out)
    except _Failure as e:
        err.write(f"error: {e}\n")
        return e.code
    except (NoSelectionInput, NoAnswerSet, AmbiguousDescription) as e:
        err.write(f"error: {e}\n")
        return EXIT_EMPTY
    except SelektaError as e:
        err.write(f"error: {e}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
