"""Planting a known cover and asking the solver to find it again.

Whether a planted motif comes back depends on whether it actually shortens
the description.  Claws planted on 1000 vertices cost more bits than the
edges they contain, so the cheapest cover dissolves them; on 5000 vertices
the same plan is cheaper as claws and the solver recovers them.
"""

from subcover import PlantSpec, SolverConfig, generate_catalog, greedy_cover, realize_uniform_cover
from subcover import resolve_motif
from subcover.information import total_information

catalog = generate_catalog(4)
tri, claw, edge = (resolve_motif(x, False) for x in ("triangle", "claw", "edge"))
plan = [(tri, 50), (claw, 100), (edge, 200)]
names = {tri.canonical_id: "triangle", claw.canonical_id: "claw", edge.canonical_id: "edge"}

for N in (1000, 3000, 5000):
    res = realize_uniform_cover(PlantSpec(N, False, plan, seed=0))
    cover, info = greedy_cover(res.graph, SolverConfig(catalog, seed=0))
    planted_bits = total_information(res.planted.counts, catalog)
    found = {names.get(k, k): n for k, n in cover.counts.counts.items()}
    print(f"N={N}: planted {planted_bits:.0f} bits, found {info.sigma:.0f} bits, ERI {info.eri:.0f}; "
          f"found {found}")
