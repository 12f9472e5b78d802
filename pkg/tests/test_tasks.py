import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gse.embedding import DescriptorConfig
from gse.errors import (
    DisconnectedJointGraph,
    DisconnectedSimilarityGraph,
    EmptyFailureSet,
    InvalidCounts,
    UnknownEdge,
)
from gse.graph import graph_from_edge_list
from gse.synthetic import lattice_corridor, path, random_connected, top_ebc_edges
from gse.tasks import (
    AlignmentProblem,
    FailureProblem,
    align,
    align_folds,
    detect_failures,
    hypergeom_log_pmf,
    hypergeom_pvalue,
    joint_graph,
    knn_gaussian_similarity,
    spectral_cluster_2,
)

from oracles import hypergeom_pmf_exact, hypergeom_tail_exact

SMALL = DescriptorConfig(num_scales=100)


# -- hypergeometric ---------------------------------------------------------


def test_pvalue_all_drawn_successes():
    # 5 of 10 failed, a 5-edge cluster holding all of them: 1 / C(10, 5)
    assert hypergeom_pvalue(10, 5, 5, 5) == pytest.approx(1 / 252, rel=1e-12)


def test_pvalue_zero_observed():
    assert hypergeom_pvalue(10, 3, 4, 0) == 1.0


def test_pvalue_small_case():
    # P(X >= 1) with 1 success in 6, 5 draws
    assert hypergeom_pvalue(6, 1, 5, 1) == pytest.approx(5 / 6, rel=1e-12)


def test_pvalue_matches_exact_oracle():
    for pop in range(1, 16):
        for k in range(pop + 1):
            for n in range(pop + 1):
                for obs in range(min(k, n) + 1):
                    ref = float(hypergeom_tail_exact(pop, k, n, obs))
                    assert hypergeom_pvalue(pop, k, n, obs) == pytest.approx(ref, rel=1e-10, abs=1e-300)


def test_pmf_sums_to_one():
    for pop in range(0, 31, 3):
        for k in range(pop + 1):
            for n in range(pop + 1):
                j = np.arange(0, min(k, n) + 1)
                total = np.exp(hypergeom_log_pmf(pop, k, n, j)).sum()
                assert abs(total - 1.0) <= 1e-12


def test_pmf_matches_exact():
    assert np.exp(hypergeom_log_pmf(20, 7, 9, 3)) == pytest.approx(float(hypergeom_pmf_exact(20, 7, 9, 3)), rel=1e-12)


def test_large_population_matches_scipy():
    from scipy.stats import hypergeom

    assert hypergeom_pvalue(5000, 40, 300, 12) == pytest.approx(hypergeom.sf(11, 5000, 40, 300), rel=1e-8)
    assert 0.0 <= hypergeom_pvalue(100000, 500, 500, 400) < 1e-100


@settings(max_examples=60, deadline=None)
@given(pop=st.integers(1, 60), data=st.data())
def test_pvalue_monotone_in_observed(pop, data):
    k = data.draw(st.integers(0, pop))
    n = data.draw(st.integers(0, pop))
    ps = [hypergeom_pvalue(pop, k, n, j) for j in range(min(k, n) + 1)]
    assert all(0.0 <= p <= 1.0 for p in ps)
    assert all(a >= b - 1e-15 for a, b in zip(ps, ps[1:]))


@pytest.mark.parametrize("args", [(5, 6, 1, 1), (5, 2, 6, 1), (-1, 0, 0, 0), (5, 2, 2, 3), (5, 2.5, 2, 1)])
def test_invalid_counts(args):
    with pytest.raises(InvalidCounts):
        hypergeom_pvalue(*args)


# -- clustering -------------------------------------------------------------


def two_blocks(rng, n=8, inner=1.0, cross=0.01):
    sim = np.full((2 * n, 2 * n), cross)
    sim[:n, :n] = inner
    sim[n:, n:] = inner
    sim += rng.uniform(0, 0.01, sim.shape)
    sim = (sim + sim.T) / 2
    np.fill_diagonal(sim, 0)
    return sim


def test_cluster_recovers_blocks(rng):
    part = spectral_cluster_2(two_blocks(rng))
    assert len(set(part.labels[:8])) == 1 and len(set(part.labels[8:])) == 1
    assert part.labels[0] != part.labels[8]
    assert part.balance == 1.0 and not part.degenerate


def test_cluster_uniform_is_degenerate():
    sim = 1.0 - np.eye(6)
    part = spectral_cluster_2(sim)
    assert part.degenerate


def test_cluster_permutation_equivariant(rng):
    sim = two_blocks(rng)
    perm = rng.permutation(16)
    a = spectral_cluster_2(sim).labels
    b = spectral_cluster_2(sim[np.ix_(perm, perm)]).labels
    same = a[perm] == b
    assert same.all() or (~same).all()


def test_cluster_disconnected():
    sim = np.zeros((4, 4))
    sim[0, 1] = sim[1, 0] = sim[2, 3] = sim[3, 2] = 1.0
    with pytest.raises(DisconnectedSimilarityGraph):
        spectral_cluster_2(sim)


def test_knn_similarity():
    pts = np.array([[0.0], [1.0], [3.0], [10.0]])
    sim, h = knn_gaussian_similarity(pts, k=1)
    # nearest-neighbour distances 1, 1, 2, 7: median 1.5
    assert h == pytest.approx(1.5)
    assert np.array_equal(sim, sim.T) and np.all(np.diag(sim) == 0)
    assert sim[0, 1] == pytest.approx(np.exp(-1 / (2 * 1.5**2)))
    assert sim[2, 3] > 0 and sim[0, 3] == 0


# -- failed-edge detection --------------------------------------------------


def planted():
    g = lattice_corridor(4, 8)
    return FailureProblem(g, frozenset(top_ebc_edges(g, 8)))


def test_detect_planted_instance():
    rep = detect_failures(planted())
    assert rep.metrics["sensitivity"] == 1.0
    assert rep.metrics["p_value"] < 0.05
    assert rep.metrics["failed_edges"] == 8
    assert len(rep.assignments) == planted().g.n_edges


def test_detect_deterministic():
    a = detect_failures(planted(), SMALL, seed=3).as_dict()
    b = detect_failures(planted(), SMALL, seed=3).as_dict()
    assert a == b


def test_detect_empty_failures():
    with pytest.raises(EmptyFailureSet):
        detect_failures(FailureProblem(path(5), frozenset()))


def test_failure_problem_unknown_edge():
    with pytest.raises(UnknownEdge):
        FailureProblem(path(4), frozenset({(0, 2)}))
    g = path(4)
    with pytest.raises(UnknownEdge):
        FailureProblem.from_labels(g, [("0", "zz")])
    assert FailureProblem.from_labels(g, [("1", "0")]).failed_edges == {(0, 1)}


# -- alignment --------------------------------------------------------------


def identity_problem(g, anchors):
    truth = tuple((i, i) for i in range(g.n_nodes))
    return AlignmentProblem(g, g, tuple((i, i) for i in anchors), truth)


def test_joint_graph_layout():
    p = identity_problem(path(3), [1])
    j = joint_graph(p)
    assert j.node_labels == ("1:0", "1:1", "1:2", "2:0", "2:1", "2:2")
    assert j.n_edges == 5 and (1, 4, 1.0) in j.edges


def test_fully_anchored_warns():
    rep = align(identity_problem(path(4), range(4)), SMALL)
    assert rep.metrics["accuracy"] == 1.0
    assert rep.metrics["n_scored"] == 0 and rep.warnings


def test_identical_copies(rng):
    g = random_connected(20, 0.3, rng)
    rep = align(identity_problem(g, range(0, 20, 2)), SMALL)
    assert rep.metrics["accuracy"] >= 0.9
    assert rep.metrics["n_queries"] == 10


def test_relabel_g2_invariance(rng):
    g = random_connected(16, 0.3, rng)
    perm = rng.permutation(16)
    h = g.relabel(perm)
    anchors = [(i, int(perm[i])) for i in range(0, 16, 2)]
    truth = tuple((i, int(perm[i])) for i in range(16))
    base = align(identity_problem(g, range(0, 16, 2)), SMALL)
    moved = align(AlignmentProblem(g, h, anchors, truth), SMALL)
    assert moved.metrics["accuracy"] == base.metrics["accuracy"]


def test_disconnected_joint_graph():
    g1 = graph_from_edge_list([("a", "b", 1)])
    with pytest.raises(DisconnectedJointGraph):
        align(AlignmentProblem(g1, g1, ()))


def test_anchors_must_be_injective():
    with pytest.raises(ValueError):
        AlignmentProblem(path(3), path(3), ((0, 0), (1, 0)))


def test_align_folds_summary(rng):
    g = random_connected(20, 0.3, rng)
    p = AlignmentProblem(g, g, tuple((i, i) for i in range(20)))
    rep = align_folds(p, SMALL, folds=3, fraction=0.5, seed=1)
    accs = rep.metrics["fold_accuracy"]
    assert len(accs) == 3
    assert rep.metrics["accuracy_mean"] == pytest.approx(np.mean(accs))
    assert rep.metrics["accuracy_std"] == pytest.approx(np.std(accs))
    assert align_folds(p, SMALL, folds=3, seed=1).metrics == rep.metrics
