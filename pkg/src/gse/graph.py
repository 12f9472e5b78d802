"""Undirected weighted graphs and the matrices derived from them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import (
    DuplicateEdge,
    EmptyGraph,
    IsolatedNode,
    NonPositiveWeight,
    SelfLoop,
    UnknownNode,
)

SYMMETRY_RTOL = 1e-12


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph with positive edge weights.

    Nodes are addressed by their position in ``node_labels``. Edges are
    stored canonically as ``(u, v, w)`` with ``u < v``, in input order.
    """

    node_labels: tuple[str, ...]
    edges: tuple[tuple[int, int, float], ...]
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        labels = tuple(str(x) for x in self.node_labels)
        object.__setattr__(self, "node_labels", labels)
        index = {label: i for i, label in enumerate(labels)}
        if len(index) != len(labels):
            raise ValueError("node labels must be unique")
        n = len(labels)
        seen = set()
        canon = []
        for u, v, w in self.edges:
            u, v, w = int(u), int(v), float(w)
            if not (0 <= u < n and 0 <= v < n):
                raise UnknownNode(f"edge ({u}, {v}) references a node outside 0..{n - 1}")
            if u == v:
                raise SelfLoop(f"self-loop on node {labels[u]!r}")
            if not (math.isfinite(w) and w > 0):
                raise NonPositiveWeight(
                    f"edge ({labels[u]!r}, {labels[v]!r}) has weight {w!r}; weights must be positive and finite"
                )
            key = (min(u, v), max(u, v))
            if key in seen:
                raise DuplicateEdge(f"duplicate edge ({labels[u]!r}, {labels[v]!r})")
            seen.add(key)
            canon.append((key[0], key[1], w))
        if not canon:
            raise EmptyGraph("graph has no edges")
        object.__setattr__(self, "edges", tuple(canon))
        object.__setattr__(self, "_index", index)

    @property
    def n_nodes(self) -> int:
        return len(self.node_labels)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownNode(f"unknown node {label!r}") from None

    def edge_pairs(self) -> list[tuple[int, int]]:
        return [(u, v) for u, v, _ in self.edges]

    def weights(self) -> np.ndarray:
        return np.array([w for _, _, w in self.edges], dtype=float)

    def neighbors(self) -> list[list[tuple[int, int]]]:
        """Adjacency lists of ``(neighbor, edge_id)`` sorted by neighbor index."""
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n_nodes)]
        for eid, (u, v, _) in enumerate(self.edges):
            adj[u].append((v, eid))
            adj[v].append((u, eid))
        for row in adj:
            row.sort()
        return adj

    def n_components(self) -> int:
        n = self.n_nodes
        u, v = np.array(self.edge_pairs()).T
        a = coo_matrix((np.ones(len(u)), (u, v)), shape=(n, n))
        return connected_components(a, directed=False)[0]

    def is_connected(self) -> bool:
        return self.n_components() == 1

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Return the same graph with node ``i`` moved to position ``perm[i]``."""
        perm = list(perm)
        if sorted(perm) != list(range(self.n_nodes)):
            raise ValueError("perm must be a permutation of 0..N-1")
        labels = [""] * self.n_nodes
        for old, new in enumerate(perm):
            labels[new] = self.node_labels[old]
        edges = [(perm[u], perm[v], w) for u, v, w in self.edges]
        return Graph(tuple(labels), tuple(edges))


def graph_from_edge_list(rows: Iterable[Sequence]) -> Graph:
    """Build a graph from ``(label, label, weight)`` rows.

    Nodes are indexed in order of first appearance. Rows may omit the
    weight, which then defaults to 1.0.
    """
    index: dict[str, int] = {}
    edges = []
    for row in rows:
        if len(row) == 2:
            a, b = row
            w = 1.0
        else:
            a, b, w = row
        a, b = str(a), str(b)
        if a == b:
            raise SelfLoop(f"self-loop on node {a!r}")
        for label in (a, b):
            if label not in index:
                index[label] = len(index)
        edges.append((index[a], index[b], float(w)))
    if not edges:
        raise EmptyGraph("edge list is empty")
    return Graph(tuple(index), tuple(edges))


def affinity_matrix(g: Graph) -> np.ndarray:
    """Dense symmetric weight matrix ``W`` with zero diagonal."""
    w = np.zeros((g.n_nodes, g.n_nodes))
    for u, v, x in g.edges:
        w[u, v] = w[v, u] = x
    return w


def as_symmetric(a, name: str = "matrix") -> np.ndarray:
    """Validate a square finite matrix and return its exact symmetrization."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise ValueError(f"{name} must be a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} has non-finite entries")
    scale = max(np.abs(a).max(), 1.0)
    if np.abs(a - a.T).max() > SYMMETRY_RTOL * scale:
        raise ValueError(f"{name} is not symmetric")
    return 0.5 * (a + a.T)


def normalized_laplacian(w) -> np.ndarray:
    """``I - D^{-1/2} W D^{-1/2}`` for a nonnegative symmetric weight matrix."""
    w = as_symmetric(w, "W")
    deg = w.sum(axis=1)
    isolated = np.flatnonzero(deg <= 0)
    if isolated.size:
        raise IsolatedNode(f"node(s) {isolated.tolist()} have zero degree")
    s = 1.0 / np.sqrt(deg)
    lap = np.eye(len(w)) - s[:, None] * w * s[None, :]
    return 0.5 * (lap + lap.T)
