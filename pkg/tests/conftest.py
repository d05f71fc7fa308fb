"""Shared fixtures and stubs for the test suite."""

import numpy as np
import pytest

from dynvc import Graph


class ForcedRng:
    """Generator stand-in that replays scripted draws.

    Used to force specific mutation outcomes: flip masks are steered through
    ``geometric`` gaps, coin flips and indices through ``integers``, and
    change polls through ``random``.
    """

    def __init__(self, geometric=(), integers=(), random=()):
        self._geo = list(geometric)
        self._int = list(integers)
        self._rnd = list(random)

    def geometric(self, p):
        return self._geo.pop(0)

    def integers(self, low, high=None, size=None):
        if size is None:
            return self._int.pop(0)
        return np.array([self._int.pop(0) for _ in range(size)], dtype=np.int64)

    def random(self):
        return self._rnd.pop(0)


def flip_mask_draws(positions, m):
    """Geometric draws that make the Bernoulli scan hit exactly ``positions``."""
    draws = []
    prev = -1
    for j in sorted(positions):
        draws.append(j - prev)
        prev = j
    draws.append(m + 1)  # overshoot terminates the scan
    return draws


@pytest.fixture
def triangle():
    g = Graph(3)
    g.add_edge(1, 2)
    g.add_edge(2, 3)
    g.add_edge(1, 3)
    return g


@pytest.fixture
def p3():
    """Unweighted path on 3 vertices: e0=(1,2), e1=(2,3)."""
    g = Graph(3)
    g.add_edge(1, 2)
    g.add_edge(2, 3)
    return g


@pytest.fixture
def p3w():
    """Weighted path, w=(1,2,1): e0=(1,2), e1=(2,3)."""
    g = Graph(3, vertex_weight={1: 1, 2: 2, 3: 1})
    g.add_edge(1, 2)
    g.add_edge(2, 3)
    return g


def random_graph(rng, n_max=10, w_max=1, min_edges=1):
    """Small random instance for property tests."""
    n = int(rng.integers(2, n_max + 1))
    weights = None
    if w_max > 1:
        weights = {v: int(rng.integers(1, w_max + 1)) for v in range(1, n + 1)}
    g = Graph(n, vertex_weight=weights)
    pairs = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)]
    total = len(pairs)
    m = int(rng.integers(min(min_edges, total), total + 1))
    for k in rng.permutation(total)[:m]:
        g.add_edge(*pairs[int(k)])
    return g
