from __future__ import annotations

import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from upex.core import UpwardEmbedding, make_instance

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# diamond: s=0, a=1, b=2, t=3
DIAMOND_EDGES = [(0, 1), (0, 2), (1, 3), (2, 3)]


def diamond_embedding(a_first: bool = True) -> UpwardEmbedding:
    order = (1, 2) if a_first else (2, 1)
    return UpwardEmbedding.from_lists(4, {0: order, 1: (3,), 2: (3,)}, {3: order, 1: (0,), 2: (0,)})


@pytest.fixture
def diamond_edges():
    return list(DIAMOND_EDGES)


@pytest.fixture
def straight_diamond():
    pos = {0: (0, 0), 1: (-1, 1), 2: (1, 1), 3: (0, 2)}
    routes = {e: [pos[e[0]], pos[e[1]]] for e in DIAMOND_EDGES}
    return make_instance(4, DIAMOND_EDGES, pos, routes)


# acceptance summary lines, printed after the run
ACCEPTANCE_LINES: dict[int, str] = {}


def record_criterion(number: int, passed: bool, detail: str) -> None:
    line = f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[number])
