"""
Ground-truth oracles for small instances
========================================

Brute force keeps the randomized searches honest: exact minimum weight
covers, exhaustive dual maximization, and the two gap measures that say
how far a dual solution still has to climb.
"""

import numpy as np

from dynvc import Graph
from dynvc.harness import greedy_maximal_dual
from dynvc.oracles import (dual_maximal, exact_min_vc, gap_G, gap_Gstar,
                           is_2_approx, max_dual_value)

g = Graph(6, vertex_weight={1: 4, 2: 1, 3: 3, 4: 2, 5: 2, 6: 5})
for u, v in [(1, 2), (1, 3), (2, 4), (3, 4), (3, 5), (4, 6), (5, 6)]:
    g.add_edge(u, v)

opt, cover = exact_min_vc(g)
print("exact minimum weight cover:", sorted(cover), "weight", opt)
print("maximum dual total:", max_dual_value(g), "<= OPT (weak duality)")

# gap_G: how much weight a pure-increase walk can still add before getting
# stuck on a maximal dual. gap_Gstar: distance to the maximum dual.
zero = np.zeros(g.m, dtype=np.int64)
print("\nfrom the all-zero dual:")
print("  gap to farthest reachable maximal dual:", gap_G(zero, g))
print("  gap to the maximum dual:", gap_Gstar(zero, g))

sol = greedy_maximal_dual(g)
print("\ngreedy maximal dual:", sol)
print("  maximal:", dual_maximal(sol, g), "-> gap_G =", gap_G(sol, g))
print("  gap to maximum:", gap_Gstar(sol, g))

# every maximal dual certifies a 2-approximation through its tight nodes
from dynvc import induced_cover

tight = induced_cover(sol, g)
print("  tight-node cover:", sorted(tight),
      "weight", sum(g.vertex_weight(v) for v in tight))
print("  within twice the optimum:", is_2_approx(tight, g))
