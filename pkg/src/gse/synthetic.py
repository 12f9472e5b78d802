"""Small synthetic graphs used by the tests, the acceptance run and the demos."""

from __future__ import annotations

import numpy as np

from .centrality import edge_betweenness
from .graph import Graph


def _graph(n, pairs, weights=None) -> Graph:
    if weights is None:
        weights = [1.0] * len(pairs)
    return Graph(tuple(str(i) for i in range(n)), tuple((u, v, w) for (u, v), w in zip(pairs, weights)))


def barbell(k: int = 5) -> Graph:
    """Two ``k``-cliques joined by a single bridge between nodes ``k-1`` and ``k``.

    Node ``i`` mirrors node ``2k-1-i``.
    """
    pairs = []
    for off in (0, k):
        pairs += [(off + i, off + j) for i in range(k) for j in range(i + 1, k)]
    pairs.append((k - 1, k))
    return _graph(2 * k, pairs)


def path(n: int) -> Graph:
    return _graph(n, [(i, i + 1) for i in range(n - 1)])


def star(leaves: int) -> Graph:
    return _graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def complete(n: int) -> Graph:
    return _graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def grid_pairs(rows: int, cols: int, offset: int = 0) -> list[tuple[int, int]]:
    pairs = []
    for r in range(rows):
        for c in range(cols):
            i = offset + r * cols + c
            if c + 1 < cols:
                pairs.append((i, i + 1))
            if r + 1 < rows:
                pairs.append((i, i + cols))
    return pairs


def random_connected(n: int, extra: float = 0.3, rng=None, weighted: bool = False, max_weight: int = 4) -> Graph:
    """Random spanning tree plus each remaining pair with probability ``extra``.

    Weighted graphs get integer weights in ``1..max_weight`` so that tied path
    lengths are exact in floating point.
    """
    rng = np.random.default_rng(rng)
    order = rng.permutation(n)
    pairs = set()
    for i in range(1, n):
        j = int(rng.integers(i))
        u, v = int(order[i]), int(order[j])
        pairs.add((min(u, v), max(u, v)))
    for u in range(n):
        for v in range(u + 1, n):
            if (u, v) not in pairs and rng.random() < extra:
                pairs.add((u, v))
    pairs = sorted(pairs)
    weights = rng.integers(1, max_weight + 1, size=len(pairs)).astype(float) if weighted else None
    return _graph(n, pairs, weights)


def random_sparse_connected(n: int, mean_degree: float = 6.0, rng=None) -> Graph:
    """Random spanning tree plus uniformly drawn extra edges up to ``mean_degree``."""
    rng = np.random.default_rng(rng)
    order = rng.permutation(n)
    pairs = set()
    for i in range(1, n):
        j = int(rng.integers(i))
        u, v = int(order[i]), int(order[j])
        pairs.add((min(u, v), max(u, v)))
    target = int(mean_degree * n / 2)
    while len(pairs) < target:
        u, v = (int(x) for x in rng.integers(n, size=2))
        if u != v:
            pairs.add((min(u, v), max(u, v)))
    return _graph(n, sorted(pairs))


def lattice_corridor(side: int = 4, corridor: int = 8) -> Graph:
    """Two ``side x side`` lattices linked by a path of ``corridor`` edges.

    The corridor joins the middle of the right edge of the first lattice to
    the middle of the left edge of the second; every corridor edge carries
    all traffic between the lattices.
    """
    n_grid = side * side
    pairs = grid_pairs(side, side) + grid_pairs(side, side, offset=n_grid)
    start = side * (side // 2) + side - 1
    end = n_grid + side * (side // 2)
    inner = list(range(2 * n_grid, 2 * n_grid + corridor - 1))
    chain = [start] + inner + [end]
    pairs += list(zip(chain[:-1], chain[1:]))
    return _graph(2 * n_grid + corridor - 1, pairs)


def top_ebc_edges(g: Graph, count: int, mode: str = "hops") -> list[tuple[int, int]]:
    """The ``count`` edges with the largest betweenness (ties by edge order)."""
    ebc = edge_betweenness(g, mode)
    idx = np.argsort(-ebc, kind="stable")[:count]
    pairs = g.edge_pairs()
    return [pairs[i] for i in idx]
