import itertools

import pytest
from hypothesis import strategies as st

from isolift.corpus_graphs import pinned
from isolift.graph import Graph


@pytest.fixture
def example():
    return pinned("example")


@pytest.fixture
def c6():
    return pinned("c6")


@pytest.fixture
def two_k3():
    return pinned("two_k3")


@st.composite
def graphs(draw, min_n=1, max_n=5):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, (e for e, keep in zip(pairs, mask) if keep))


@st.composite
def graph_and_perm(draw, min_n=1, max_n=5):
    g = draw(graphs(min_n, max_n))
    perm = draw(st.permutations(range(g.n)))
    return g, list(perm)


def cells1(p):
    """Cells of a partition as sets of 1-based tuples."""
    return {frozenset(tuple(x + 1 for x in u) for u in c) for c in p}


ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for i in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[i])
