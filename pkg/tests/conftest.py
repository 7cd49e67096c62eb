import pytest

from selekta.corpus import load_running
from selekta.selection.engine import evaluate_selection
from selekta.xmlql.facts import emit_parser_facts
from selekta.xmlql.syntax import parse_query


def _running(modified):
    base, text = load_running(modified)
    rq = emit_parser_facts(parse_query(text))
    return base, rq, evaluate_selection(base, rq)


@pytest.fixture(scope="session")
def running():
    """(base, parser facts, report) for the three-source example."""
    return _running(False)


@pytest.fixture(scope="session")
def running_modified():
    return _running(True)


ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
