import io
import itertools
import math
import random

import pytest

from subcover.graph import Graph, load_edge_list


def graph_from_text(text, directed=False):
    return load_edge_list(io.StringIO(text), directed=directed)


def random_graph(rng: random.Random, n: int, m: int, directed=False) -> Graph:
    pairs = [(a, b) for a in range(n) for b in range(n) if a != b and (directed or a < b)]
    return Graph(n, rng.sample(pairs, min(m, len(pairs))), directed)


def disjoint_triangles(count: int) -> Graph:
    edges = []
    for t in range(count):
        a = 3 * t
        edges += [(a, a + 1), (a, a + 2), (a + 1, a + 2)]
    return Graph(3 * count, edges)


def disjoint_cliques(count: int, size: int) -> Graph:
    edges = []
    for c in range(count):
        base = c * size
        edges += [(base + i, base + j) for i, j in itertools.combinations(range(size), 2)]
    return Graph(count * size, edges)


def triangular_lattice(rows: int, cols: int) -> Graph:
    """Grid with one diagonal per cell: every cell splits into two triangles."""
    idx = lambda r, c: r * cols + c
    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((idx(r, c), idx(r, c + 1)))
            if r + 1 < rows:
                edges.append((idx(r, c), idx(r + 1, c)))
            if r + 1 < rows and c + 1 < cols:
                edges.append((idx(r, c), idx(r + 1, c + 1)))
    return Graph(rows * cols, edges)


def erdos_renyi(n: int, m: int, seed: int) -> Graph:
    rng = random.Random(seed)
    edges = set()
    while len(edges) < m:
        a, b = rng.randrange(n), rng.randrange(n)
        if a != b:
            edges.add((min(a, b), max(a, b)))
    return Graph(n, sorted(edges))


def log2_comb(p, n):
    return math.log2(math.comb(p, n))


@pytest.fixture
def triangle():
    return Graph(3, [(0, 1), (0, 2), (1, 2)])


@pytest.fixture
def k4():
    return Graph(4, list(itertools.combinations(range(4), 2)))


@pytest.fixture
def bowtie():
    return Graph(5, [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)])


# -- acceptance result lines ------------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


def record(criterion: str, ok: bool, detail: str) -> bool:
    line = f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
