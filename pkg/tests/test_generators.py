import math
from collections import Counter

import numpy as np
import pytest
from scipy import stats

from subcover.errors import InfeasibleSpecError
from subcover.generators import (PlantSpec, bjr_probability, expected_bjr_count, generate_bjr,
                                 realize_uniform_cover)
from subcover.motifs import resolve_motif

TRI = resolve_motif("triangle", False)
EDGE = resolve_motif("edge", False)
CLAW = resolve_motif("claw", False)


def test_single_triangle_on_three_vertices():
    res = realize_uniform_cover(PlantSpec(3, False, [(TRI, 1)], seed=4))
    assert res.graph.edges == ((0, 1), (0, 2), (1, 2))
    assert [i.vertices for i in res.planted.instances] == [(0, 1, 2)]
    assert res.collisions == 0


def test_five_edges():
    res = realize_uniform_cover(PlantSpec(100, False, [(EDGE, 5)], seed=0))
    assert res.graph.m == 5
    assert res.planted.counts.counts == {EDGE.canonical_id: 5}


@pytest.mark.parametrize("seed", range(5))
def test_planted_cover_valid_and_distinct(seed):
    spec = PlantSpec(1000, False, [(TRI, 50), (CLAW, 100), (EDGE, 200)], seed)
    res = realize_uniform_cover(spec)
    assert res.planted.is_complete(res.graph)
    assert res.counts == {TRI.canonical_id: 50, CLAW.canonical_id: 100, EDGE.canonical_id: 200}
    per_motif = Counter(i.motif for i in res.planted.instances)
    assert per_motif == Counter(res.counts)
    assert res.graph.m == 150 + 300 + 200 - res.collisions


def test_seed_determinism():
    spec = PlantSpec(200, True, [(resolve_motif("ffl", True), 20), (resolve_motif("arc", True), 40)], 7)
    a, b = realize_uniform_cover(spec), realize_uniform_cover(spec)
    assert a.graph == b.graph and a.planted.instances == b.planted.instances
    c = realize_uniform_cover(PlantSpec(200, True, spec.plan, 8))
    assert c.graph != a.graph


def test_uniform_placements_chi_square():
    counts = Counter()
    trials = 12000
    for seed in range(trials):
        res = realize_uniform_cover(PlantSpec(4, False, [(TRI, 1)], seed))
        counts[res.planted.instances[0].vertices] += 1
    assert len(counts) == 4
    _, pval = stats.chisquare(list(counts.values()))
    assert pval > 1e-3


def test_infeasible_specs():
    with pytest.raises(InfeasibleSpecError):
        realize_uniform_cover(PlantSpec(4, False, [(TRI, 5)]))
    with pytest.raises(InfeasibleSpecError):
        PlantSpec(3, False, [(CLAW, 1)])
    with pytest.raises(InfeasibleSpecError):
        realize_uniform_cover(PlantSpec(10, False, [(TRI, 2.5)]))


def test_every_placement_can_be_drawn():
    res = realize_uniform_cover(PlantSpec(6, False, [(TRI, 20)], 3))
    assert res.graph.m == 15 and len(res.planted.instances) == 20


def test_bjr_probability_and_expectation():
    N, k = 1000, 2.0
    assert bjr_probability(TRI, k, N) == pytest.approx(6 * k / N ** 2)
    assert expected_bjr_count(TRI, k, N) == pytest.approx(k * (N - 1) * (N - 2) / N)
    assert expected_bjr_count(TRI, 2.0, 500) == pytest.approx(994.008, abs=1e-3)


def test_bjr_monte_carlo_mean():
    N, k = 1000, 1.5
    draws = [generate_bjr(PlantSpec(N, False, [(TRI, k)], seed)).counts[TRI.canonical_id]
             for seed in range(120)]
    mean = np.mean(draws)
    sem = np.std(draws, ddof=1) / math.sqrt(len(draws))
    assert abs(mean - expected_bjr_count(TRI, k, N)) < 3 * sem


def test_bjr_directed_edges():
    arc = resolve_motif("arc", True)
    N, k = 2000, 2.0
    sizes = [generate_bjr(PlantSpec(N, True, [(arc, k)], seed)).graph.m for seed in range(60)]
    expected = expected_bjr_count(arc, k, N)
    assert expected == pytest.approx(k * (N - 1))
    assert abs(np.mean(sizes) - expected) < 3 * np.std(sizes, ddof=1) / math.sqrt(len(sizes))


def test_bjr_zero_density_is_empty():
    res = generate_bjr(PlantSpec(50, False, [(TRI, 0.0), (EDGE, 0.0)], 1))
    assert res.graph.m == 0 and res.planted.instances == []


def test_bjr_rejects_probability_above_one():
    with pytest.raises(InfeasibleSpecError):
        generate_bjr(PlantSpec(5, False, [(TRI, 10.0)]))
