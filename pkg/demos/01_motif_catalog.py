"""Motif classes, their symmetries and the candidate catalogs.

Every motif is stored under a canonical edge list, so relabelled copies of
the same shape collapse to one id.  The automorphism group decides how many
distinct placements a motif has on N vertices, and its orbits are the roles
a vertex can play inside an instance.
"""

from subcover import automorphism_group, canonical_form, generate_catalog, resolve_motif

# Same shape, different labels: one canonical id.
print(canonical_form((3, [(0, 1), (1, 2), (0, 2)], False)))
print(canonical_form((3, [(2, 0), (0, 1), (1, 2)], False)))

for name, directed in [("triangle", False), ("claw", False), ("cycle3", True), ("ffl", True)]:
    m = resolve_motif(name, directed)
    print(f"{name:9s} {m.canonical_id:16s} |Aut|={m.aut_size} orbits={m.orbits} "
          f"eps={m.epsilon_bits:.2f} bits")

size, orbits = automorphism_group((4, [(0, 1), (0, 2), (0, 3)], False))
print("claw: centre and leaves fall into", orbits, "with", size, "automorphisms")

# Candidate catalogs.  Two-vertex motifs count as biconnected.
for max_size, directed, kind in [(5, False, "connected"), (6, False, "connected"),
                                 (5, True, "connected"), (5, True, "biconnected")]:
    cat = generate_catalog(max_size, directed, kind)
    sizes = {}
    for m in cat:
        sizes[m.size] = sizes.get(m.size, 0) + 1
    label = "directed" if directed else "undirected"
    print(f"{label:10s} {kind:11s} up to {max_size}: {len(cat):5d} classes, by size {sizes}")
