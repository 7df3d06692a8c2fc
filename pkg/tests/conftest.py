"""Shared strategies and the acceptance-summary hook."""

from __future__ import annotations

import itertools

import networkx as nx
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from shortcut_forge import DiGraph

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


@st.composite
def dags(draw, min_n: int = 1, max_n: int = 9) -> DiGraph:
    n = draw(st.integers(min_n, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    perm = draw(st.permutations(range(n)))
    return DiGraph(n, [(perm[u], perm[v]) for u, v in chosen])


@st.composite
def digraphs(draw, min_n: int = 1, max_n: int = 9) -> DiGraph:
    n = draw(st.integers(min_n, max_n))
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=3 * n)) if pairs else []
    return DiGraph(n, chosen)


def to_nx(g: DiGraph, extra=()) -> nx.DiGraph:
    h = nx.DiGraph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    h.add_edges_from(extra)
    return h


def nx_reachable_pairs(g: DiGraph) -> set[tuple[int, int]]:
    h = to_nx(g)
    return {(u, v) for u in range(g.n) for v in nx.descendants(h, u)}


def nx_diameter(g: DiGraph, extra=()) -> float:
    """Max hop distance over reachable distinct pairs of g, measured in g plus extra."""
    h = to_nx(g, extra)
    worst = 0
    for u in range(g.n):
        dist = nx.single_source_shortest_path_length(h, u)
        for v in nx.descendants(to_nx(g), u):
            worst = max(worst, dist.get(v, float("inf")))
    return worst


def brute_min_shortcut(g: DiGraph, d: int) -> int:
    """Plain itertools search, kept independent of the library oracle."""
    cands = sorted(nx_reachable_pairs(g) - set(g.edges))
    for k in range(len(cands) + 1):
        for combo in itertools.combinations(cands, k):
            if nx_diameter(g, combo) <= d:
                return k
    raise AssertionError("the full closure always works")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES
