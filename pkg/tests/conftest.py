import math

import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from ramanujan_lab.graph import WeightedGraph

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@st.composite
def weighted_graphs(draw, min_n=2, max_n=9, connected=False, min_weight=0.05, max_weight=3.0):
    """Random simple graphs with positive weights; optionally forced connected
    by threading a random spanning path through the vertices first."""
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = set(draw(st.sets(st.sampled_from(pairs), max_size=len(pairs))) if pairs else set())
    if connected:
        order = draw(st.permutations(range(n)))
        chosen |= {tuple(sorted((order[i], order[i + 1]))) for i in range(n - 1)}
    ws = draw(st.lists(st.floats(min_weight, max_weight), min_size=len(chosen), max_size=len(chosen)))
    return WeightedGraph(n, tuple((u, v, w) for (u, v), w in zip(sorted(chosen), ws)))


def brute_force_girth(G: WeightedGraph) -> float:
    """Shortest simple cycle by depth-first enumeration of every simple path
    that returns to its (smallest) start vertex."""
    nbrs = [sorted(v for v, _ in G.adj[u]) for u in range(G.n)]
    best = math.inf

    def extend(start, path, on_path):
        nonlocal best
        u = path[-1]
        for v in nbrs[u]:
            if v == start and len(path) >= 3:
                best = min(best, len(path))
            elif v > start and v not in on_path and len(path) + 1 < best:
                on_path.add(v)
                path.append(v)
                extend(start, path, on_path)
                path.pop()
                on_path.remove(v)

    for s in range(G.n):
        extend(s, [s], {s})
    return best


@pytest.fixture
def rng():
    return np.random.default_rng(20240613)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
