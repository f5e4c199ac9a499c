import itertools
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from lamchoose.graph import PartiteGraph  # noqa: E402


def all_graphs(n):
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    for mask in range(1 << len(pairs)):
        yield PartiteGraph.from_edges(n, [e for i, e in enumerate(pairs) if mask >> i & 1])


@pytest.fixture
def k24():
    from lamchoose.graph import complete_bipartite
    return complete_bipartite(2, 4)


_CRITERIA = {}


@pytest.fixture
def criterion(capsys):
    """Record one acceptance line; printed live and again in the summary."""
    def record(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        _CRITERIA[number] = line
        with capsys.disabled():
            print("\n" + line)
        assert ok, line
    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for number in sorted(_CRITERIA):
            terminalreporter.write_line(_CRITERIA[number])
