"""
Weighted covers via dual edge weights
=====================================

For weighted vertex cover we push integer weights onto edges, never letting
a vertex's incident total exceed its own weight. When every edge has a
tight endpoint, the tight vertices form a cover of weight at most twice
the optimum (weak duality bounds the dual total from above by OPT).
"""

import numpy as np

from dynvc import (Graph, exact_min_vc, fitness_weighted, induced_cover,
                   max_dual_value, node_load, spawn_rng, step_weighted,
                   target_reached)

# a weighted path: the middle vertex is expensive
g = Graph(5, vertex_weight={1: 2, 2: 3, 3: 5, 4: 3, 5: 2})
for u, v in [(1, 2), (2, 3), (3, 4), (4, 5)]:
    g.add_edge(u, v)

sol = np.zeros(g.m, dtype=np.int64)
print("start:", sol, fitness_weighted(sol, g))

# single +-1 moves on random edges, accepted only on strict improvement:
# fewer overloads, then fewer uncovered edges, then more total weight
rng = spawn_rng(11, 0)
steps = 0
f = fitness_weighted(sol, g)
while not target_reached(sol, g, "weighted"):
    sol = step_weighted(sol, g, "rls", rng, f)
    f = fitness_weighted(sol, g)
    steps += 1

print(f"maximal dual after {steps} evaluations: {sol}")
for v in range(1, g.n + 1):
    print(f"  v{v}: load {node_load(sol, g, v)} / weight {g.vertex_weight(v)}")

cover = induced_cover(sol, g)
cover_weight = sum(g.vertex_weight(v) for v in cover)
opt, best = exact_min_vc(g)
print("tight-vertex cover:", sorted(cover), "weight", cover_weight)
print("dual total:", int(sol.sum()), "<= OPT:", opt, "(weak duality)")
print("optimal cover:", sorted(best), "weight", opt)
print("ratio:", cover_weight / opt, "<= 2")
print("maximum possible dual total:", max_dual_value(g))
