"""Downstream evaluation: anchored network alignment and failed-edge detection."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Literal, Optional

import numpy as np
from scipy.cluster.vq import kmeans2
from scipy.sparse.csgraph import connected_components
from scipy.spatial.distance import cdist
from scipy.special import gammaln, logsumexp

from .centrality import PathMetric
from .embedding import DescriptorConfig, edge_embed, gse
from .errors import (
    DegenerateClustering,
    DisconnectedJointGraph,
    DisconnectedSimilarityGraph,
    EmptyFailureSet,
    InvalidCounts,
    UnknownEdge,
    UnknownNode,
)
from .graph import Graph, as_symmetric, normalized_laplacian
from .linalg import sym_eig

log = logging.getLogger(__name__)

Distance = Literal["euclidean", "cosine"]


@dataclass
class TaskReport:
    metrics: dict
    assignments: list
    config: dict = field(default_factory=dict)
    seed: int = 0
    warnings: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "metrics": self.metrics,
            "config": self.config,
            "seed": self.seed,
            "warnings": self.warnings,
        }


# -- hypergeometric tail ----------------------------------------------------


def _log_comb(n, k):
    return gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)


def _check_counts(population, successes, draws):
    for name, v in (("population", population), ("successes", successes), ("draws", draws)):
        if int(v) != v or v < 0:
            raise InvalidCounts(f"{name} must be a nonnegative integer, got {v!r}")
    if successes > population or draws > population:
        raise InvalidCounts("successes and draws cannot exceed the population")


def hypergeom_log_pmf(population: int, successes: int, draws: int, observed) -> np.ndarray:
    _check_counts(population, successes, draws)
    j = np.asarray(observed, dtype=float)
    out = (
        _log_comb(successes, j)
        + _log_comb(population - successes, draws - j)
        - _log_comb(population, draws)
    )
    lo, hi = max(0, draws - (population - successes)), min(successes, draws)
    return np.where((j >= lo) & (j <= hi), out, -np.inf)


def hypergeom_pvalue(population: int, successes: int, draws: int, observed: int) -> float:
    """``P(X >= observed)`` for ``X ~ Hypergeometric(population, successes, draws)``.

    Summed in log space. ``population`` is the edge count, ``successes``
    the number of failed edges, ``draws`` the size of the selected cluster
    and ``observed`` the failed edges inside it.
    """
    _check_counts(population, successes, draws)
    if int(observed) != observed or not 0 <= observed <= min(successes, draws):
        raise InvalidCounts(f"observed must lie in 0..{min(successes, draws)}, got {observed!r}")
    if observed == 0:
        return 1.0
    j = np.arange(observed, min(successes, draws) + 1)
    p = math.exp(logsumexp(hypergeom_log_pmf(population, successes, draws, j)))
    return min(1.0, p)


# -- spectral bipartition ---------------------------------------------------


@dataclass(frozen=True)
class Bipartition:
    labels: np.ndarray
    fiedler_value: float
    balance: float  # smaller cluster size / larger cluster size
    degenerate: bool


def spectral_cluster_2(sim, seed: int = 0, gap_tol: float = 1e-9) -> Bipartition:
    """Two-way normalized spectral clustering.

    The second eigenvector of the normalized Laplacian of ``sim`` is split by
    sign, then refined by 2-means started from the two sign-group means. A
    (near-)repeated second eigenvalue means the split is not determined by
    the data; the result is then flagged ``degenerate``.
    """
    sim = as_symmetric(sim, "similarity")
    if np.any(sim < 0):
        raise ValueError("similarity must be nonnegative")
    sim = sim - np.diag(np.diag(sim))
    n = len(sim)
    if n < 2:
        raise DegenerateClustering("need at least two items to cluster")
    if connected_components(sim != 0, directed=False)[0] > 1:
        raise DisconnectedSimilarityGraph("similarity graph is disconnected")
    es = sym_eig(normalized_laplacian(sim))
    fiedler = es.vectors[:, 1]
    degenerate = n > 2 and es.values[2] - es.values[1] <= gap_tol * max(1.0, abs(es.values[1]))
    labels = (fiedler < 0).astype(int)
    if 0 < labels.sum() < n:
        init = np.array([[fiedler[labels == 0].mean()], [fiedler[labels == 1].mean()]])
        _, labels = kmeans2(fiedler[:, None], init, minit="matrix", rng=np.random.default_rng(seed))
    else:
        _, labels = kmeans2(fiedler[:, None], 2, minit="++", rng=np.random.default_rng(seed))
    labels = np.asarray(labels, dtype=int)
    sizes = np.bincount(labels, minlength=2)
    if sizes.min() == 0:
        raise DegenerateClustering("spectral split produced an empty cluster")
    return Bipartition(labels, float(es.values[1]), float(sizes.min() / sizes.max()), bool(degenerate))


def knn_gaussian_similarity(points, k: int = 10) -> tuple[np.ndarray, float]:
    """Symmetric k-NN graph with weights ``exp(-d^2 / (2 h^2))``.

    ``h`` is the median distance over all k-NN pairs. An edge is kept if
    either endpoint lists the other among its ``k`` nearest neighbours.
    """
    x = np.asarray(points, dtype=float)
    n = len(x)
    if k < 1:
        raise ValueError("k must be >= 1")
    k = min(k, n - 1)
    d = cdist(x, x)
    np.fill_diagonal(d, np.inf)
    nbrs = np.argsort(d, axis=1, kind="stable")[:, :k]
    rows = np.repeat(np.arange(n), k)
    cols = nbrs.ravel()
    dist = d[rows, cols]
    h = float(np.median(dist))
    if not h > 0:
        h = float(dist.max()) if dist.max() > 0 else 1.0
    sim = np.zeros((n, n))
    sim[rows, cols] = np.exp(-(dist**2) / (2.0 * h * h))
    return np.maximum(sim, sim.T), h


# -- failed-edge detection --------------------------------------------------


@dataclass(frozen=True)
class FailureProblem:
    g: Graph
    failed_edges: frozenset  # canonical (u, v) index pairs with u < v

    def __post_init__(self):
        failed = frozenset((min(u, v), max(u, v)) for u, v in self.failed_edges)
        known = set(self.g.edge_pairs())
        missing = failed - known
        if missing:
            u, v = sorted(missing)[0]
            raise UnknownEdge(f"failed edge ({u}, {v}) is not an edge of the graph")
        object.__setattr__(self, "failed_edges", failed)

    @classmethod
    def from_labels(cls, g: Graph, pairs) -> "FailureProblem":
        idx = []
        for a, b in pairs:
            try:
                idx.append((g.index(a), g.index(b)))
            except UnknownNode as exc:
                raise UnknownEdge(f"failed edge ({a}, {b}): {exc}") from None
        return cls(g, frozenset(idx))


def detect_failures(
    p: FailureProblem,
    cfg: DescriptorConfig = DescriptorConfig(),
    knn: int = 10,
    seed: int = 0,
    mode: PathMetric = "hops",
    symmetric_edges: bool = False,
) -> TaskReport:
    """Cluster edge embeddings in two and flag the cluster with larger mean EBC."""
    if not p.failed_edges:
        raise EmptyFailureSet("no failed edges given")
    if knn < 1:
        raise ValueError("knn must be >= 1")
    g = p.g
    res = gse(g, cfg, mode)
    feats = edge_embed(res.embedding, g, symmetric=symmetric_edges)
    sim, h = knn_gaussian_similarity(feats, knn)
    part = spectral_cluster_2(sim, seed)
    ebc = res.centrality.ebc
    means = [float(ebc[part.labels == c].mean()) for c in (0, 1)]
    chosen = int(np.argmax(means))
    predicted = part.labels == chosen
    is_failed = np.array([pair in p.failed_edges for pair in g.edge_pairs()])
    hits = int(np.sum(predicted & is_failed))
    n_failed = int(is_failed.sum())
    metrics = {
        "sensitivity": hits / n_failed,
        "p_value": hypergeom_pvalue(g.n_edges, n_failed, int(predicted.sum()), hits),
        "true_positives": hits,
        "failed_edges": n_failed,
        "predicted_size": int(predicted.sum()),
        "n_edges": g.n_edges,
        "balance": part.balance,
        "cluster_mean_ebc": means,
        "kernel_bandwidth": h,
    }
    warnings = []
    if part.degenerate:
        warnings.append("spectral bipartition is degenerate (repeated second eigenvalue)")
    assignments = [
        (g.node_labels[u], g.node_labels[v], int(lab), bool(pred), bool(f))
        for (u, v), lab, pred, f in zip(g.edge_pairs(), part.labels, predicted, is_failed)
    ]
    config = {"descriptor": cfg.as_dict(), "knn": knn, "path_metric": mode}
    return TaskReport(metrics, assignments, config, seed, warnings)


# -- network alignment ------------------------------------------------------


@dataclass(frozen=True)
class AlignmentProblem:
    g1: Graph
    g2: Graph
    anchors: tuple  # (index in g1, index in g2)
    ground_truth: Optional[tuple] = None

    def __post_init__(self):
        anchors = tuple((int(a), int(b)) for a, b in self.anchors)
        for a, b in anchors:
            if not (0 <= a < self.g1.n_nodes and 0 <= b < self.g2.n_nodes):
                raise UnknownNode(f"anchor ({a}, {b}) out of range")
        if len({a for a, _ in anchors}) != len(anchors) or len({b for _, b in anchors}) != len(anchors):
            raise ValueError("anchors must be one-to-one")
        object.__setattr__(self, "anchors", anchors)
        if self.ground_truth is not None:
            object.__setattr__(
                self, "ground_truth", tuple((int(a), int(b)) for a, b in self.ground_truth)
            )

    @classmethod
    def from_labels(cls, g1: Graph, g2: Graph, anchors, ground_truth=None) -> "AlignmentProblem":
        a = tuple((g1.index(x), g2.index(y)) for x, y in anchors)
        t = None if ground_truth is None else tuple((g1.index(x), g2.index(y)) for x, y in ground_truth)
        return cls(g1, g2, a, t)


def joint_graph(p: AlignmentProblem, anchor_weight: float = 1.0) -> Graph:
    """Disjoint union of both graphs plus one edge per anchor pair.

    Nodes of ``g1`` keep indices ``0..N1-1``; node ``j`` of ``g2`` becomes
    ``N1 + j``. Labels are prefixed ``1:`` and ``2:``.
    """
    n1 = p.g1.n_nodes
    labels = tuple(f"1:{x}" for x in p.g1.node_labels) + tuple(f"2:{x}" for x in p.g2.node_labels)
    edges = list(p.g1.edges)
    edges += [(u + n1, v + n1, w) for u, v, w in p.g2.edges]
    edges += [(a, b + n1, anchor_weight) for a, b in p.anchors]
    return Graph(labels, tuple(edges))


def align(
    p: AlignmentProblem,
    cfg: DescriptorConfig = DescriptorConfig(),
    metric: Distance = "euclidean",
    anchor_weight: float = 1.0,
    mode: PathMetric = "hops",
    seed: int = 0,
) -> TaskReport:
    """Match every non-anchor node of ``g1`` to its nearest ``g2`` node in GSE space."""
    if metric not in ("euclidean", "cosine"):
        raise ValueError(f"metric must be 'euclidean' or 'cosine', got {metric!r}")
    joint = joint_graph(p, anchor_weight)
    if not joint.is_connected():
        raise DisconnectedJointGraph(
            f"joint graph has {joint.n_components()} components; add anchors or connect the inputs"
        )
    emb = gse(joint, cfg, mode).embedding.values
    n1 = p.g1.n_nodes
    anchored = {a for a, _ in p.anchors}
    queries = [i for i in range(n1) if i not in anchored]
    matches: dict[int, int] = {}
    if queries:
        d = cdist(emb[queries], emb[n1:], metric=metric)
        # argmin returns the first minimum, i.e. the lowest g2 index on ties
        for q, j in zip(queries, np.argmin(d, axis=1)):
            matches[q] = int(j)
    metrics: dict = {"n_queries": len(queries), "n_anchors": len(p.anchors)}
    warnings = []
    if p.ground_truth is not None:
        truth = {a: b for a, b in p.ground_truth if a not in anchored}
        scored = [q for q in queries if q in truth]
        correct = sum(matches[q] == truth[q] for q in scored)
        if scored:
            metrics["accuracy"] = correct / len(scored)
        else:
            metrics["accuracy"] = 1.0
            warnings.append("no non-anchor node with a ground-truth match; accuracy over an empty set")
            log.warning(warnings[-1])
        metrics["n_scored"] = len(scored)
        metrics["n_correct"] = int(correct)
    assignments = [(p.g1.node_labels[q], p.g2.node_labels[j]) for q, j in sorted(matches.items())]
    config = {
        "descriptor": cfg.as_dict(),
        "distance": metric,
        "anchor_weight": anchor_weight,
        "path_metric": mode,
    }
    return TaskReport(metrics, assignments, config, seed, warnings)


def align_folds(
    p: AlignmentProblem,
    cfg: DescriptorConfig = DescriptorConfig(),
    folds: int = 5,
    fraction: float = 0.5,
    metric: Distance = "euclidean",
    anchor_weight: float = 1.0,
    mode: PathMetric = "hops",
    seed: int = 0,
) -> TaskReport:
    """Repeat ``align`` over seeded random anchor subsets.

    Each fold keeps ``fraction`` of the known anchors. Without a full
    ground truth, the held-out anchors are what gets scored.
    """
    if folds < 1:
        raise ValueError("folds must be >= 1")
    if not 0 < fraction <= 1:
        raise ValueError("fraction must be in (0, 1]")
    rng = np.random.default_rng(seed)
    accs, fold_reports = [], []
    n_keep = max(1, int(round(fraction * len(p.anchors))))
    for f in range(folds):
        chosen = np.sort(rng.choice(len(p.anchors), size=n_keep, replace=False))
        kept = tuple(p.anchors[i] for i in chosen)
        truth = p.ground_truth if p.ground_truth is not None else p.anchors
        rep = align(AlignmentProblem(p.g1, p.g2, kept, truth), cfg, metric, anchor_weight, mode, seed)
        fold_reports.append(rep)
        accs.append(rep.metrics["accuracy"])
    metrics = {
        "accuracy_mean": float(np.mean(accs)),
        "accuracy_std": float(np.std(accs)),
        "fold_accuracy": [float(a) for a in accs],
        "folds": folds,
        "anchor_fraction": fraction,
    }
    config = dict(fold_reports[0].config, folds=folds, anchor_fraction=fraction)
    warnings = sorted({w for r in fold_reports for w in r.warnings})
    return TaskReport(metrics, fold_reports[-1].assignments, config, seed, warnings)


