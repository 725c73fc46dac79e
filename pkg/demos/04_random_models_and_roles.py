"""Random graphs with clustering and the roles a cover assigns to vertices.

The BJR-style generator switches on each possible triangle with a small
probability, so the triangle count is binomial around k (N-1)(N-2)/N.
A cover then gives every vertex a multiset of (motif, orbit) roles, which
is what a configuration model with motifs needs as input.
"""

from collections import Counter

import numpy as np

from subcover import (PlantSpec, SolverConfig, generate_bjr, generate_catalog, greedy_cover,
                      resolve_motif, role_sequence)
from subcover.generators import expected_bjr_count

tri, edge = resolve_motif("triangle", False), resolve_motif("edge", False)
N, k = 500, 2.0
draws = [generate_bjr(PlantSpec(N, False, [(tri, k)], seed=s)).counts[tri.canonical_id] for s in range(50)]
print(f"triangles per draw: mean {np.mean(draws):.1f}, expected {expected_bjr_count(tri, k, N):.1f}")

res = generate_bjr(PlantSpec(N, False, [(tri, 1.0), (edge, 1.0)], seed=3))
cover, info = greedy_cover(res.graph, SolverConfig(generate_catalog(3), seed=0))
print(f"|E|={res.graph.m}, cover {dict(cover.counts.counts)}, compression {100 * info.compression:.1f}%")

roles = role_sequence(cover, res.graph)
shapes = Counter(tuple(sorted(r.elements())) for r in roles.values() if r)
print("most common vertex role multisets:")
for shape, n in shapes.most_common(5):
    print(f"  {n:4d} x {shape}")
