"""Dual edge-weight representation for weighted vertex cover search.

A candidate solution assigns a nonnegative integer weight to every edge
slot. A vertex is loaded by the sum of weights on its incident edges and
enters the induced cover once its load reaches its own weight. Quality is
the triple (overloaded vertices, uncovered edges, total edge weight) with
fewer overloads beating fewer uncovered beating larger total weight; driving
the total weight up against the vertex capacities yields a maximal dual
solution whose tight vertices 2-approximate the minimum weight cover.

Zero is a legal edge weight throughout: the all-zero vector is the canonical
start state and decrements clamp at zero.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .classic import _flip_positions
from .graph import Graph


class WeightedFitness(NamedTuple):
    violations: int    # vertices with load strictly above their weight
    uncovered: int     # edges with no endpoint in the induced cover
    total_weight: int  # sum of all edge weights

    @property
    def order_key(self) -> tuple[int, int, int]:
        """Sort key under which larger means better."""
        return (-self.violations, -self.uncovered, self.total_weight)

    def beats(self, other: "WeightedFitness") -> bool:
        """Strictly better: the acceptance test used by both step operators."""
        return self.order_key > other.order_key


def empty_solution(g: Graph) -> np.ndarray:
    """All-zero weight vector for the graph's current edges."""
    return np.zeros(g.m, dtype=np.int64)


def _check(sol: np.ndarray, g: Graph) -> None:
    if sol.shape[0] != g.m:
        raise ValueError(f"solution length {sol.shape[0]} != edge count {g.m}")
    if sol.shape[0] and int(sol.min()) < 0:
        raise ValueError("edge weights must be nonnegative")


def loads(sol: np.ndarray, g: Graph) -> np.ndarray:
    """Per-vertex load: sum of incident edge weights, as int64 indexed 1..n."""
    _check(sol, g)
    eu, ev = g.edge_arrays()
    out = np.zeros(g.n + 1, dtype=np.int64)
    if sol.shape[0]:
        s64 = sol.astype(np.int64, copy=False)
        np.add.at(out, eu, s64)
        np.add.at(out, ev, s64)
    return out


def node_load(sol: np.ndarray, g: Graph, v: int) -> int:
    """Load of a single vertex."""
    g.vertex_weight(v)  # validates v
    return int(loads(sol, g)[v])


def induced_cover(sol: np.ndarray, g: Graph) -> set[int]:
    """Vertices whose load reaches (or exceeds) their weight.

    The >= rule keeps the cover monotone in edge weights so that transiently
    overloaded mutants still get a well-defined uncovered count.
    """
    ld = loads(sol, g)
    return set(map(int, np.nonzero(ld[1:] >= g.weights[1:])[0] + 1))


def fitness_weighted(sol: np.ndarray, g: Graph) -> WeightedFitness:
    """Evaluate the lexicographic triple for ``sol`` on ``g``."""
    ld = loads(sol, g)
    w = g.weights
    violations = int(np.count_nonzero(ld > w))
    eu, ev = g.edge_arrays()
    covered = ld >= w
    covered[0] = False
    uncovered = g.m - int(np.count_nonzero(covered[eu] | covered[ev]))
    return WeightedFitness(violations, uncovered, int(sol.sum()))


def mutate_weight_global(sol: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Each edge independently with probability 1/m: +1, or -1 clamped at 0.

    The direction is a fair coin per selected edge (0 means increment).
    """
    out = sol.copy()
    m = out.shape[0]
    if m == 0:
        return out
    pos = _flip_positions(rng, m, 1.0 / m)
    if pos:
        dirs = rng.integers(0, 2, size=len(pos))
        for j, b in zip(pos, dirs):
            out[j] = out[j] + 1 if b == 0 else max(int(out[j]) - 1, 0)
    return out


def mutate_weight_local(sol: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Change one uniformly chosen edge weight by +-1 (fair coin, clamped at 0)."""
    out = sol.copy()
    m = out.shape[0]
    if m == 0:
        return out
    j = int(rng.integers(m))
    b = int(rng.integers(2))
    out[j] = out[j] + 1 if b == 0 else max(int(out[j]) - 1, 0)
    return out


def step_weighted(sol: np.ndarray, g: Graph, variant: str,
                  rng: np.random.Generator,
                  fitness: WeightedFitness | None = None) -> np.ndarray:
    """One mutate-and-select step; the mutant is kept iff strictly better.

    Unlike the classical rule there are no plateau moves: ties are rejected.
    Exactly one mutant evaluation is performed.
    """
    if variant == "ea":
        mutant = mutate_weight_global(sol, rng)
    elif variant == "rls":
        mutant = mutate_weight_local(sol, rng)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    if fitness is None:
        fitness = fitness_weighted(sol, g)
    if fitness_weighted(mutant, g).beats(fitness):
        return mutant
    return sol


def format_solution(sol: np.ndarray) -> str:
    """Serialize as ``sol weighted <int> ...`` in graph-file edge order."""
    return ("sol weighted" + "".join(f" {int(x)}" for x in sol)) + "\n"


def parse_solution(text: str) -> np.ndarray:
    parts = text.split()
    if len(parts) < 2 or parts[0] != "sol" or parts[1] != "weighted":
        raise ValueError("expected: sol weighted <int> ...")
    try:
        vals = [int(x) for x in parts[2:]]
    except ValueError:
        raise ValueError(f"bad weight list in {text.strip()!r}") from None
    if any(x < 0 for x in vals):
        raise ValueError("edge weights must be nonnegative")
    return np.array(vals, dtype=np.int64)
