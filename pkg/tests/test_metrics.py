import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from injnet.graph_core import EdgeKind, GraphError, SpatialGraph
from injnet.metrics import (
    UNREACHABLE,
    DisconnectedGraphError,
    MetricsRecord,
    MetricsTracker,
    characteristic_path_length,
    clustering_coefficient,
    gamma_random,
    hop_matrix,
    hops_with_edge,
    l_random,
    local_clustering,
    measure,
    small_world_verdict,
    verdict_for,
)

from oracles import abstract_graph, clustering_oracle, path_length_oracle, random_connected_graph

TRIANGLE_PLUS_PENDANT = [(0, 1), (1, 2), (1, 3), (2, 3)]  # node 1 has degree 3


def complete(n):
    return abstract_graph(n, itertools.combinations(range(n), 2))


def cycle(n):
    return abstract_graph(n, [(i, (i + 1) % n) for i in range(n)])


class TestLocalClustering:
    def test_triangle(self):
        assert local_clustering(complete(3), 0) == 1.0

    def test_star_center(self):
        assert local_clustering(abstract_graph(4, [(0, 1), (0, 2), (0, 3)]), 0) == 0.0

    def test_degree_one(self):
        assert local_clustering(abstract_graph(2, [(0, 1)]), 0) == 0.0

    def test_triangle_plus_pendant(self):
        g = abstract_graph(4, TRIANGLE_PLUS_PENDANT)
        assert local_clustering(g, 1) == pytest.approx(1 / 3, abs=1e-15)

    def test_bypass_edges_count(self):
        g = SpatialGraph(50, [(0, 0), (40, 0), (200, 0)])
        g.add_edge(0, 1)
        g.add_edge(0, 2, EdgeKind.BYPASS)
        g.add_edge(1, 2, EdgeKind.BYPASS)
        assert [local_clustering(g, v) for v in range(3)] == [1.0, 1.0, 1.0]

    def test_unknown_node(self):
        with pytest.raises(GraphError):
            local_clustering(complete(3), 3)


class TestClusteringCoefficient:
    def test_four_cycle(self):
        assert clustering_coefficient(cycle(4)) == 0.0

    def test_k5(self):
        assert clustering_coefficient(complete(5)) == 1.0

    def test_triangle_plus_pendant(self):
        g = abstract_graph(4, TRIANGLE_PLUS_PENDANT)
        assert clustering_coefficient(g) == pytest.approx(7 / 12, abs=1e-15)

    def test_exclude_low_degree(self):
        g = abstract_graph(4, TRIANGLE_PLUS_PENDANT)
        assert clustering_coefficient(g, include_low_degree=False) == pytest.approx(7 / 9)

    def test_empty(self):
        with pytest.raises(GraphError):
            clustering_coefficient(SpatialGraph(1))


class TestPathLength:
    def test_path3(self):
        assert characteristic_path_length(abstract_graph(3, [(0, 1), (1, 2)])) == 1.5

    @pytest.mark.parametrize("n", [2, 3, 6, 9])
    def test_complete(self, n):
        assert characteristic_path_length(complete(n)) == 1.0

    def test_five_cycle(self):
        assert characteristic_path_length(cycle(5)) == 1.5

    def test_even_count_median(self):
        # path on 4 nodes: means 2, 4/3, 4/3, 2 -> median 5/3
        g = abstract_graph(4, [(0, 1), (1, 2), (2, 3)])
        assert characteristic_path_length(g) == pytest.approx(5 / 3, abs=1e-15)

    def test_pairwise_mode(self):
        # path on 4 nodes: pair distances 1,1,1,2,2,3 -> median 1.5
        g = abstract_graph(4, [(0, 1), (1, 2), (2, 3)])
        assert characteristic_path_length(g, mode="pairwise-median") == 1.5

    def test_disconnected(self):
        with pytest.raises(DisconnectedGraphError, match="fully connected"):
            characteristic_path_length(abstract_graph(3, [(0, 1)]))

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            characteristic_path_length(complete(3), mode="mean")


class TestBaselines:
    def test_gamma_random(self):
        assert gamma_random(100, Fraction("7.512")) == Fraction("0.07512")
        assert gamma_random(10, 10) == 1.0
        assert gamma_random(200, 4) == 0.02
        with pytest.raises(ValueError):
            gamma_random(0, 3)

    def test_l_random(self):
        assert l_random(100, 7.512) == pytest.approx(2.283742230559824, abs=1e-12)
        assert l_random(37, 37) == 1.0
        assert l_random(2, 2) == 1.0
        with pytest.raises(ValueError):
            l_random(100, 1.0)
        with pytest.raises(ValueError):
            l_random(1, 3)


class TestVerdict:
    def test_lattice_is_not_small_world(self):
        g = abstract_graph(9, [(0, 1), (1, 2), (3, 4), (4, 5), (6, 7), (7, 8),
                               (0, 3), (3, 6), (1, 4), (4, 7), (2, 5), (5, 8)])
        ok, rec = small_world_verdict(g)
        assert rec.gamma == 0.0
        assert not ok

    @pytest.mark.parametrize("n", [4, 8, 20])
    def test_complete_graph_fails_clustering_dominance(self, n):
        ok, rec = small_world_verdict(complete(n), alpha=5)
        assert rec.gamma == 1.0
        assert rec.gamma < 5 * gamma_random(n, rec.k)
        assert not ok

    def test_clustered_short_graph_passes(self):
        rec = MetricsRecord(n=100, k=7.5, gamma=0.5, L=3.0)
        assert verdict_for(rec)
        assert not verdict_for(MetricsRecord(n=100, k=7.5, gamma=0.5, L=5.0))
        assert not verdict_for(MetricsRecord(n=100, k=7.5, gamma=0.3, L=3.0))

    def test_sparse_graph_is_never_small_world(self):
        assert not verdict_for(MetricsRecord(n=2, k=1.0, gamma=0.0, L=1.0))

    def test_threshold_validation(self):
        rec = MetricsRecord(n=100, k=7.5, gamma=0.5, L=3.0)
        with pytest.raises(ValueError):
            verdict_for(rec, alpha=1.0)
        with pytest.raises(ValueError):
            verdict_for(rec, beta=0.5)

    def test_disconnected(self):
        with pytest.raises(DisconnectedGraphError):
            small_world_verdict(abstract_graph(3, [(0, 1)]))


def test_record_normalized():
    rec = MetricsRecord(n=3, k=2.0, gamma=1.0, L=2.0)
    assert rec.normalized(4.0).L_norm == 0.5
    with pytest.raises(ValueError):
        rec.normalized(0)


# -- oracle comparisons and properties -------------------------------------


def test_metrics_match_oracles_on_random_connected_graphs():
    rng = random.Random(11)
    for _ in range(200):
        n = rng.randint(2, 12)
        edges = random_connected_graph(rng, n, rng.uniform(0, 0.6))
        g = abstract_graph(n, edges)
        local, mean = clustering_oracle(n, edges)
        assert [local_clustering(g, v) for v in range(n)] == pytest.approx([float(x) for x in local], abs=1e-12)
        assert clustering_coefficient(g) == pytest.approx(float(mean), abs=1e-12)
        for mode in ("node-mean", "pairwise-median"):
            expected = path_length_oracle(n, edges, mode)
            assert characteristic_path_length(g, mode) == pytest.approx(float(expected), abs=1e-12)


@settings(max_examples=150, deadline=None)
@given(st.integers(2, 12), st.floats(0, 0.7), st.randoms(use_true_random=False))
def test_bounds(n, density, rnd):
    edges = random_connected_graph(rnd, n, density)
    rec = measure(abstract_graph(n, edges))
    assert 0.0 <= rec.gamma <= 1.0
    assert rec.L >= 1.0


@settings(max_examples=150, deadline=None)
@given(st.integers(2, 12), st.floats(0, 0.5), st.randoms(use_true_random=False))
def test_path_length_never_increases_on_insertion(n, density, rnd):
    edges = random_connected_graph(rnd, n, density)
    missing = [p for p in itertools.combinations(range(n), 2) if p not in set(edges)]
    if not missing:
        return
    extra = rnd.choice(missing)
    for mode in ("node-mean", "pairwise-median"):
        before = characteristic_path_length(abstract_graph(n, edges), mode)
        after = characteristic_path_length(abstract_graph(n, edges + [extra]), mode)
        assert after <= before


def test_removing_bridge_without_common_neighbor_is_local():
    rng = random.Random(5)
    for _ in range(50):
        n = rng.randint(4, 12)
        edges = random_connected_graph(rng, n, 0.3)
        g = abstract_graph(n, edges)
        candidates = [(u, v) for u, v in edges if not (g.neighbors(u) & g.neighbors(v))]
        if not candidates:
            continue
        u, v = rng.choice(candidates)
        before = [local_clustering(g, w) for w in range(n)]
        g.remove_edge(u, v)
        after = [local_clustering(g, w) for w in range(n)]
        for w in range(n):
            if w not in (u, v):
                assert after[w] == before[w]


class TestIncremental:
    def test_hops_with_edge_matches_bfs(self):
        rng = random.Random(2)
        for _ in range(100):
            n = rng.randint(2, 12)
            # possibly disconnected start
            edges = [e for e in random_connected_graph(rng, n, 0.2) if rng.random() < 0.7]
            missing = [p for p in itertools.combinations(range(n), 2) if p not in set(edges)]
            if not missing:
                continue
            u, v = rng.choice(missing)
            got = hops_with_edge(hop_matrix(abstract_graph(n, edges)), u, v)
            want = hop_matrix(abstract_graph(n, edges + [(u, v)]))
            assert np.array_equal(got, want)
            assert got.max() <= UNREACHABLE

    def test_tracker_matches_full_recompute(self):
        rng = random.Random(9)
        n = 12
        edges = random_connected_graph(rng, n, 0.1)
        g = abstract_graph(n, edges)
        tracker = MetricsTracker(g)
        missing = [p for p in itertools.combinations(range(n), 2) if p not in set(edges)]
        rng.shuffle(missing)
        for u, v in missing[:20]:
            probe = tracker.probe_edge(u, v, EdgeKind.SPATIAL)
            h = g.copy()
            h.add_edge(u, v)
            assert probe == measure(h)
            assert tracker.snapshot() == measure(g)
            tracker.add_edge(u, v, EdgeKind.SPATIAL)
            assert tracker.snapshot() == measure(g)

    def test_tracker_pairwise_mode(self):
        rng = random.Random(4)
        g = abstract_graph(10, random_connected_graph(rng, 10, 0.1))
        t = MetricsTracker(g, mode="pairwise-median")
        assert t.snapshot() == measure(g, mode="pairwise-median")
        with pytest.raises(ValueError):
            MetricsTracker(g, mode="bogus")


def test_l_random_matches_direct_evaluation():
    assert l_random(1000, 10) == pytest.approx(3.0, abs=1e-12)
    assert l_random(100, 7.512) == pytest.approx(math.log(100) / math.log(7.512), abs=1e-15)
