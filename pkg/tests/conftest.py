import itertools

import pytest
from hypothesis import strategies as st

from ghforge.graph import SimpleGraph, build_simple_graph


def P(n):
    return build_simple_graph(n, [(i, i + 1) for i in range(n - 1)])


def C(n):
    return build_simple_graph(n, [(i, (i + 1) % n) for i in range(n)])


def K(n):
    return build_simple_graph(n, itertools.combinations(range(n), 2))


def star(leaves):
    return build_simple_graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def barbell():
    return build_simple_graph(6, [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (2, 3)])


@pytest.fixture
def P3():
    return P(3)


@pytest.fixture
def K4():
    return K(4)


@pytest.fixture
def C4():
    return C(4)


@pytest.fixture
def bb():
    return barbell()


@st.composite
def graphs(draw, min_n=2, max_n=10):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return SimpleGraph(n, [e for e, k in zip(pairs, keep) if k])


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
