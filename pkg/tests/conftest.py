import pytest

from dynlog import bundles
from dynlog.textio import parse_automaton, parse_propositions

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def skyline_algebra():
    return parse_propositions(bundles.path("skyline", "propositions.txt").read_text())


@pytest.fixture(scope="session")
def skyline():
    return parse_automaton(bundles.path("skyline", "automaton.txt").read_text())


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
