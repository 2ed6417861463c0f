import sys
import itertools

import pytest
from hypothesis import strategies as st

from edskernel.graph import Graph, fig2, fig2_ids


@st.composite
def graphs(draw, min_n=0, max_n=7, connected=False):
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    edges = [p for p, keep in zip(pairs, mask) if keep]
    if connected:
        # a random spanning path keeps every draw connected
        perm = draw(st.permutations(range(n)))
        edges += [(perm[i], perm[i + 1]) for i in range(n - 1)]
        edges = sorted({tuple(sorted(e)) for e in edges})
    return Graph(n, edges)


@pytest.fixture(scope="session")
def fig():
    return fig2()


@pytest.fixture(scope="session")
def ids():
    return fig2_ids


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = sorted(getattr(mod, "RESULTS", []))
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
