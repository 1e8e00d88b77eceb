import os
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import HealthCheck, settings

from specind.generators import complete_graph, cycle_graph, empty_graph, path_graph
from specind.gibbs import Graph, build_hardcore

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def brute_independent_sets(graph: Graph):
    """Every independent set as a sorted tuple, by checking all subsets."""
    out = []
    for k in range(graph.n + 1):
        for s in combinations(range(graph.n), k):
            if all(not (u in s and v in s) for u, v in graph.edges):
                out.append(s)
    return out


def brute_hardcore(graph: Graph, lam) -> dict[tuple[int, ...], Fraction]:
    """Exact Gibbs table {config: probability} by direct enumeration."""
    lam = Fraction(lam)
    w = {}
    for s in brute_independent_sets(graph):
        w[tuple(1 if v in s else 0 for v in range(graph.n))] = lam ** len(s)
    z = sum(w.values())
    return {c: x / z for c, x in w.items()}


@pytest.fixture
def edge():
    return build_hardcore(path_graph(2), 1)


@pytest.fixture
def path3():
    return build_hardcore(path_graph(3), 1)


@pytest.fixture
def triangle():
    return build_hardcore(complete_graph(3), 1)


@pytest.fixture
def product3():
    return build_hardcore(empty_graph(3), Fraction(1, 2))


@pytest.fixture
def cycle5():
    return build_hardcore(cycle_graph(5), 1)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
