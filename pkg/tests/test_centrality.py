import networkx as nx
import numpy as np
import pytest

from gse.centrality import build_centrality_graph, edge_betweenness
from gse.errors import ZeroCentralityEdge
from gse.graph import Graph, affinity_matrix, graph_from_edge_list
from gse.synthetic import barbell, complete, path, random_connected, star

from oracles import brute_force_ebc, hop_distances


def oracle(g, weighted=False):
    return brute_force_ebc(g.n_nodes, list(g.edges), weighted)


@pytest.mark.parametrize(
    "g, expected",
    [
        (complete(2), [2.0]),
        (path(3), [4.0, 4.0]),
        (star(3), [6.0, 6.0, 6.0]),
    ],
)
def test_small_cases_match_enumeration(g, expected):
    # expected values are what the path enumerator produces; check both agree
    assert np.allclose(oracle(g), expected)
    assert np.allclose(edge_betweenness(g), expected, rtol=0, atol=1e-12)


def test_barbell_bridge_is_strict_maximum():
    g = barbell(5)
    ebc = edge_betweenness(g)
    bridge = g.edge_pairs().index((4, 5))
    assert np.allclose(ebc, oracle(g), atol=1e-9)
    # the bridge is on the unique path between every cross pair: 5 * 5 * 2
    assert ebc[bridge] == pytest.approx(50.0)
    assert np.all(np.delete(ebc, bridge) < ebc[bridge])


@pytest.mark.parametrize("weighted", [False, True])
def test_oracle_equivalence_random(rng, weighted):
    for _ in range(40):
        g = random_connected(int(rng.integers(2, 9)), 0.35, rng, weighted=weighted)
        mode = "weighted" if weighted else "hops"
        assert np.allclose(edge_betweenness(g, mode), oracle(g, weighted), rtol=0, atol=1e-9)


def test_disconnected_pairs_contribute_zero():
    g = graph_from_edge_list([("a", "b", 1), ("b", "c", 1), ("x", "y", 1)])
    assert np.allclose(edge_betweenness(g), [4.0, 4.0, 2.0])


def test_sum_rule(rng):
    for _ in range(30):
        g = random_connected(int(rng.integers(2, 9)), 0.3, rng)
        d = hop_distances(g.n_nodes, g.edges)
        total = sum(d[s][t] for s in range(g.n_nodes) for t in range(g.n_nodes) if s != t)
        assert edge_betweenness(g).sum() == pytest.approx(total, abs=1e-9)


def test_twice_networkx_unnormalized(rng):
    for _ in range(10):
        g = random_connected(int(rng.integers(5, 15)), 0.2, rng, weighted=True)
        G = nx.Graph()
        G.add_weighted_edges_from(g.edges)
        for mode, weight in (("hops", None), ("weighted", "weight")):
            ref = nx.edge_betweenness_centrality(G, normalized=False, weight=weight)
            ref = np.array([ref.get((u, v), ref.get((v, u))) for u, v, _ in g.edges])
            assert np.allclose(edge_betweenness(g, mode), 2 * ref, atol=1e-9)


def test_permutation_equivariance(rng):
    for _ in range(20):
        n = int(rng.integers(3, 11))
        g = random_connected(n, 0.3, rng)
        perm = rng.permutation(n)
        h = g.relabel(perm)
        # relabel keeps edge order, so values match position by position; the
        # summation order over sources changes, hence rounding-level tolerance
        assert np.allclose(edge_betweenness(h), edge_betweenness(g), rtol=0, atol=1e-12)


def test_deterministic():
    g = random_connected(12, 0.3, 7)
    assert np.array_equal(edge_betweenness(g), edge_betweenness(g))


def test_centrality_graph_k2():
    cg = build_centrality_graph(complete(2))
    assert np.array_equal(cg.w_be, [[0, 2], [2, 0]])
    assert np.allclose(cg.l_be, [[1, -1], [-1, 1]], atol=1e-15)


def test_centrality_graph_path():
    cg = build_centrality_graph(path(3))
    assert np.array_equal(cg.w_be, [[0, 4, 0], [4, 0, 4], [0, 4, 0]])
    assert np.allclose(np.linalg.eigvalsh(cg.l_be), [0, 1, 2], atol=1e-12)


def test_centrality_graph_keeps_support(rng):
    for _ in range(10):
        g = random_connected(int(rng.integers(3, 12)), 0.3, rng)
        cg = build_centrality_graph(g)
        assert np.array_equal(cg.w_be > 0, affinity_matrix(g) > 0)
        assert np.all(cg.ebc > 0)
        assert cg.ebc_map()[g.edge_pairs()[0]] == cg.ebc[0]


def test_zero_centrality_edge_reported():
    # under weighted distances the heavy edge a-c is never on a shortest path
    g = Graph(("a", "b", "c"), ((0, 1, 1.0), (1, 2, 1.0), (0, 2, 5.0)))
    assert edge_betweenness(g, "weighted")[2] == 0.0
    with pytest.raises(ZeroCentralityEdge):
        build_centrality_graph(g, "weighted")
    build_centrality_graph(g, "hops")


def test_unknown_mode():
    with pytest.raises(ValueError):
        edge_betweenness(path(3), "random-walk")
