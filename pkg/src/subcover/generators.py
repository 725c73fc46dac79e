"""Synthetic graphs with a known (planted) subgraph cover.

``realize_uniform_cover`` draws a fixed number of distinct placements per
motif; ``generate_bjr`` draws the numbers first, as the homogeneous
random-graph-with-clustering model does when each distinct placement is
switched on independently with probability ``k_m |Aut(m)| / N^(|m|-1)``.
Overlapping placements share edges; parallel edges merge.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DensityError, InfeasibleSpecError
from .enumeration import Instance
from .graph import Graph, edge_key
from .information import placements
from .motifs import MotifClass
from .solver import Cover


@dataclass
class PlantSpec:
    """``plan`` pairs each motif with an exact count (uniform model) or a
    density ``k_m`` (BJR model)."""

    N: int
    directed: bool
    plan: list[tuple[MotifClass, float]]
    seed: int = 0

    def __post_init__(self):
        for m, target in self.plan:
            if m.directed != self.directed:
                raise ValueError(f"motif {m.canonical_id} does not match directed={self.directed}")
            if target < 0:
                raise InfeasibleSpecError(f"negative target for {m.canonical_id}")
            if m.size > self.N:
                raise InfeasibleSpecError(f"motif {m.canonical_id} does not fit on N={self.N}")


@dataclass
class PlantedResult:
    graph: Graph
    planted: Cover
    collisions: int
    counts: dict[str, int] = field(default_factory=dict)


def _draw_placements(rng, m: MotifClass, count: int, N: int, directed: bool):
    if count > placements(m, N):
        raise InfeasibleSpecError(
            f"{count} instances of {m.canonical_id} exceed its {placements(m, N)} placements on N={N}")
    budget = 20 * count + 1000
    seen: set[tuple] = set()
    out = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > budget:
            raise DensityError(f"could not draw {count} distinct {m.canonical_id} placements "
                               f"on N={N}; increase N")
        verts = rng.choice(N, size=m.size, replace=False)
        keys = tuple(sorted(edge_key(int(verts[u]), int(verts[v]), directed) for u, v in m.edges))
        if keys in seen:
            continue
        seen.add(keys)
        out.append(Instance(m.canonical_id, tuple(sorted(int(x) for x in verts)), keys))
    return out


def _assemble(spec: PlantSpec, counts: list[int], rng) -> PlantedResult:
    instances = []
    for (m, _), n in zip(spec.plan, counts):
        instances.extend(_draw_placements(rng, m, n, spec.N, spec.directed))
    all_edges = [e for inst in instances for e in inst.edges]
    g = Graph(spec.N, all_edges, spec.directed)
    cover = Cover.from_instances(g, instances)
    tally: dict[str, int] = {}
    for (m, _), n in zip(spec.plan, counts):
        tally[m.canonical_id] = tally.get(m.canonical_id, 0) + n
    return PlantedResult(g, cover, len(all_edges) - g.m, tally)


def realize_uniform_cover(spec: PlantSpec) -> PlantedResult:
    """Exactly ``n_m`` distinct uniformly random placements of every motif."""
    counts = []
    for m, target in spec.plan:
        if int(target) != target:
            raise InfeasibleSpecError(f"uniform covers need integer counts, got {target} for {m}")
        counts.append(int(target))
    keys = [m.canonical_id for m, _ in spec.plan]
    if len(set(keys)) != len(keys):
        raise InfeasibleSpecError("each motif may appear once in a uniform-cover plan")
    return _assemble(spec, counts, np.random.default_rng(spec.seed))


def bjr_probability(m: MotifClass, density: float, N: int) -> float:
    return density * m.aut_size / float(N) ** (m.size - 1)


def generate_bjr(spec: PlantSpec) -> PlantedResult:
    """Homogeneous BJR graph: ``Binomial(P(m, N), p_m)`` placements per motif."""
    rng = np.random.default_rng(spec.seed)
    counts = []
    for m, density in spec.plan:
        p = bjr_probability(m, density, spec.N)
        if p > 1.0:
            raise InfeasibleSpecError(
                f"density {density} for {m.canonical_id} gives probability {p:.3g} > 1 on N={spec.N}")
        total = placements(m, spec.N)
        if total < 2**62:
            counts.append(int(rng.binomial(total, p)))
        else:
            counts.append(int(rng.poisson(total * p)))
    merged = {}
    for (m, _), n in zip(spec.plan, counts):
        merged[m.canonical_id] = merged.get(m.canonical_id, 0) + n
    if len(merged) != len(counts):
        raise InfeasibleSpecError("each motif may appear once in a BJR plan")
    return _assemble(spec, counts, rng)


def expected_bjr_count(m: MotifClass, density: float, N: int) -> float:
    return placements(m, N) * bjr_probability(m, density, N)
