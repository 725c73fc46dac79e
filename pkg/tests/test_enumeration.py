import itertools
import random

import numpy as np
import pytest

from conftest import random_graph
from subcover import enumeration as en
from subcover.enumeration import (collect_instances, count_instances,
                                  enumerate_connected_vertex_sets, find_instances)
from subcover.errors import UnsupportedSizeError
from subcover.graph import Graph
from subcover.motifs import generate_catalog, resolve_motif
from test_motifs import brute_canon


def brute_instances(g, m):
    """Every |E(m)|-subset of host edges spanning |m| vertices that is isomorphic to m."""
    out = set()
    for sub in itertools.combinations(g.edges, m.edge_count):
        verts = sorted({x for e in sub for x in e})
        if len(verts) != m.size:
            continue
        local = {v: i for i, v in enumerate(verts)}
        if brute_canon(m.size, [(local[u], local[v]) for u, v in sub], g.directed) == m.edges:
            out.add(tuple(sorted(sub)))
    return out


def test_connected_sets_examples(triangle):
    assert list(enumerate_connected_vertex_sets(triangle, 3)) == [(0, 1, 2)]
    path = Graph(4, [(0, 1), (1, 2), (2, 3)])
    assert sorted(enumerate_connected_vertex_sets(path, 3)) == [(0, 1, 2), (1, 2, 3)]
    k5 = Graph(5, list(itertools.combinations(range(5), 2)))
    assert len(list(enumerate_connected_vertex_sets(k5, 3))) == 10


def test_connected_sets_unique_and_complete():
    rng = random.Random(3)
    for _ in range(10):
        g = random_graph(rng, 8, rng.randint(6, 14))
        for k in (2, 3, 4, 5):
            got = list(enumerate_connected_vertex_sets(g, k))
            assert len(got) == len(set(got))
            expected = set()
            for s in itertools.combinations(range(g.n), k):
                sub = [e for e in g.edges if e[0] in s and e[1] in s]
                local = {v: i for i, v in enumerate(s)}
                if sub and _connected(k, [(local[u], local[v]) for u, v in sub]):
                    expected.add(s)
            assert set(got) == expected


def _connected(k, edges):
    from test_motifs import weakly_connected
    return weakly_connected(k, edges)


def test_find_instances_examples(triangle, k4):
    tri = resolve_motif("triangle", False)
    assert count_instances(k4, tri) == 4
    p3 = resolve_motif("path3", False)
    found = list(find_instances(triangle, p3))
    assert len(found) == 3
    assert all(len(i.edges) == 2 for i in found)
    assert list(find_instances(triangle, tri, covered=set(triangle.edges))) == []
    star = Graph(4, [(0, 1), (0, 2), (0, 3)])
    assert count_instances(star, tri) == 0
    cyc = Graph(3, [(0, 1), (1, 2), (2, 0)], directed=True)
    assert count_instances(cyc, resolve_motif("ffl", True)) == 0


def test_partial_cover_keeps_instances_with_new_edges(triangle):
    tri = resolve_motif("triangle", False)
    assert len(list(find_instances(triangle, tri, covered={(0, 1), (0, 2)}))) == 1


@pytest.mark.parametrize("directed", [False, True])
def test_against_brute_force_oracle(directed):
    rng = random.Random(11 + directed)
    motifs = list(generate_catalog(4 if not directed else 3, directed))
    if directed:
        motifs += rng.sample([m for m in generate_catalog(4, True) if m.size == 4], 25)
    for _ in range(15):
        n = rng.randint(4, 7)
        g = random_graph(rng, n, rng.randint(n, 2 * n + 2), directed)
        for m in motifs:
            got = {i.edges for i in find_instances(g, m)}
            assert got == brute_instances(g, m), m.canonical_id


@pytest.mark.parametrize("directed", [False, True])
def test_matcher_agrees_with_esu(directed, monkeypatch):
    rng = random.Random(5)
    large = [m for m in generate_catalog(5 if directed else 6, directed) if m.size >= 5]
    for _ in range(8):
        n = rng.randint(6, 8)
        g = random_graph(rng, n, rng.randint(n, 3 * n), directed)
        ms = rng.sample(large, 5)
        runs = []
        for limit in (0, 99):
            monkeypatch.setattr(en, "MATCH_MAX_TARGETS", limit)
            runs.append(sorted((t, v, tuple(sorted(ids))) for t, v, ids in en._iter_raw(g, ms, range(n))))
        assert runs[0] == runs[1]


def test_collect_is_independent_of_workers():
    rng = random.Random(8)
    g = random_graph(rng, 60, 150)
    motifs = list(generate_catalog(4))
    one = collect_instances(g, motifs, workers=1)
    two = collect_instances(g, motifs, workers=2)
    for a, b in zip(one, two):
        assert np.array_equal(a.edges, b.edges)
    assert one[motifs.index(resolve_motif("triangle", False))].edges.shape[1] == 3


def test_cap_marks_overflow():
    g = Graph(6, list(itertools.combinations(range(6), 2)))
    [table] = collect_instances(g, [resolve_motif("triangle", False)], cap=5)
    assert table.overflow and len(table) == 0


def test_size_limit():
    with pytest.raises(UnsupportedSizeError):
        list(enumerate_connected_vertex_sets(Graph(3, [(0, 1)]), 7))
