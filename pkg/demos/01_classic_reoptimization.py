"""
Re-optimizing a vertex cover after an edge deletion
===================================================

A maximal matching certifies a 2-approximate vertex cover: pick the
endpoints of the matched edges. This demo builds a path, lets the matching
lose one matched edge, and watches the bit-flip search repair it.
"""

import numpy as np

from dynvc import (RemoveEdge, apply_change, cover_set, fitness_classic,
                   greedy_maximal_matching, make_instance, spawn_rng,
                   step_classic, target_reached)

# a path with 20 edges on 21 vertices
g = make_instance("path", 20)
rng = spawn_rng(master_seed=7, run_index=0)

sol = greedy_maximal_matching(g, rng)
print("matched edges:", [g.endpoints(j) for j in np.nonzero(sol)[0]])
print("cover:", sorted(cover_set(sol, g)))
print("fitness (adjacent pairs, uncovered, cover size):", fitness_classic(sol, g))

# delete a matched edge whose endpoints are load-bearing: the neighbouring
# path edges lose their only cover vertex and turn uncovered
victim = int(np.nonzero(sol)[0][0])
for j in map(int, np.nonzero(sol)[0]):
    trial = g.copy()
    if fitness_classic(apply_change(trial, sol, RemoveEdge(j)), trial).uncovered:
        victim = j
        break
print("\ndeleting matched edge", g.endpoints(victim))
sol = apply_change(g, sol, RemoveEdge(victim))
print("fitness after deletion:", fitness_classic(sol, g))

# the (1+1) search flips each bit with probability 1/m and keeps the
# mutant whenever it is no worse; uncovered edges dominate cover size
steps = 0
f = fitness_classic(sol, g)
while not target_reached(sol, g, "classic"):
    sol = step_classic(sol, g, "ea", rng, f)
    f = fitness_classic(sol, g)
    steps += 1

print(f"\nre-optimized after {steps} evaluations")
print("new cover:", sorted(cover_set(sol, g)))
print("is maximal matching again:", target_reached(sol, g, "classic"))
