import pytest
from hypothesis import settings

from connpw.graph_core import Graph

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("[")[1].split("]")[0])):
            terminalreporter.write_line(line)


def make(n, edges):
    return Graph.from_edges(n, edges)


@pytest.fixture
def p4():
    return make(4, [(0, 1), (1, 2), (2, 3)])


@pytest.fixture
def c4():
    return make(4, [(0, 1), (1, 2), (2, 3), (0, 3)])


@pytest.fixture
def star5():
    return make(6, [(0, i) for i in range(1, 6)])
