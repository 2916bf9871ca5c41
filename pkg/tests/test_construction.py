import itertools
import random
import statistics

import pytest

from injnet.construction import (
    ConstructionParams,
    Field,
    LatticeSpec,
    PartitionScenario,
    build_lattice,
    build_partition_pair,
    construct_family,
    default_p_values,
    relocate_sweep,
)
from injnet.graph_core import EdgeKind, GraphError, SpatialGraph
from injnet.graphio import dumps
from injnet.seeding import make_rng

SPEC = LatticeSpec(10, 10, 36)


def params(p, spec=SPEC, **kw):
    return ConstructionParams(p=p, tr=50.0, field=spec.default_field(), **kw)


class TestLattice:
    def test_row_is_path(self):
        g = build_lattice(LatticeSpec(1, 3, 36), 50)
        assert g.edges() == [(0, 1, EdgeKind.SPATIAL), (1, 2, EdgeKind.SPATIAL)]

    def test_square_is_four_cycle(self):
        g = build_lattice(LatticeSpec(2, 2, 36), 50)
        assert [(u, v) for u, v, _ in g.edges()] == [(0, 1), (0, 2), (1, 3), (2, 3)]

    def test_ten_by_ten_degrees(self):
        g = build_lattice(SPEC, 50)
        degrees = {v: g.degree(v) for v in g.nodes()}
        assert {degrees[v] for v in (0, 9, 90, 99)} == {2}
        interior = [r * 10 + c for r in range(1, 9) for c in range(1, 9)]
        assert all(degrees[v] == 4 for v in interior)
        assert g.num_edges() == 180

    def test_node_layout(self):
        g = build_lattice(LatticeSpec(3, 4, 10), 12)
        assert g.position(6) == (20.0, 10.0)

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            LatticeSpec(0, 3, 36)
        with pytest.raises(ValueError):
            LatticeSpec(3, 3, 0)


class TestFieldAndParams:
    def test_default_field_is_bounding_box(self):
        assert SPEC.default_field() == Field(0, 0, 324, 324)

    def test_degenerate_side_widened(self):
        assert LatticeSpec(1, 3, 36).default_field() == Field(0, -18, 72, 18)

    def test_validation(self):
        with pytest.raises(ValueError):
            Field(0, 0, 0, 1)
        with pytest.raises(ValueError):
            params(1.5)
        with pytest.raises(ValueError):
            params(0.5, max_tries=0)


class TestRelocateSweep:
    def test_p_zero_is_identity(self):
        lattice = build_lattice(SPEC, 50)
        out = relocate_sweep(lattice, params(0.0), make_rng(1))
        assert out == lattice
        assert out is not lattice

    def test_p_one_moves_most_nodes(self):
        lattice = build_lattice(SPEC, 50)
        out = relocate_sweep(lattice, params(1.0), make_rng(1))
        moved = sum(a != b for a, b in zip(lattice.positions, out.positions))
        assert moved > 50
        assert out.is_connected()

    def test_input_untouched(self):
        lattice = build_lattice(SPEC, 50)
        before = dumps(lattice)
        relocate_sweep(lattice, params(1.0), make_rng(2))
        assert dumps(lattice) == before

    def test_exhausted_retries_revert(self):
        lattice = build_lattice(LatticeSpec(3, 3, 36), 50)
        far = ConstructionParams(1.0, 50.0, Field(1000, 1000, 1100, 1100), max_tries=5)
        assert relocate_sweep(lattice, far, make_rng(0)) == lattice

    def test_disconnecting_move_reverts(self):
        lattice = build_lattice(LatticeSpec(1, 3, 36), 50)
        near_origin = ConstructionParams(1.0, 50.0, Field(-10, -10, 10, 10))
        out = relocate_sweep(lattice, near_origin, make_rng(0))
        # moving the middle node next to node 0 would strand node 2
        assert out.position(1) == (36.0, 0.0)
        assert out.position(2) != (72.0, 0.0)
        assert out.is_connected()

    def test_single_node(self):
        g = build_lattice(LatticeSpec(1, 1, 36), 50)
        assert relocate_sweep(g, params(1.0, LatticeSpec(1, 1, 36)), make_rng(0)) == g

    def test_rejects_disconnected_input(self):
        g = SpatialGraph(50, [(0, 0), (100, 0)])
        with pytest.raises(GraphError, match="connected"):
            relocate_sweep(g, params(0.5), make_rng(0))

    def test_rejects_bypass_edges(self):
        g = SpatialGraph(50, [(0, 0), (100, 0)])
        g.add_edge(0, 1, EdgeKind.BYPASS)
        with pytest.raises(GraphError):
            relocate_sweep(g, params(0.5), make_rng(0))

    def test_invariants_over_seeds(self):
        rng = random.Random(7)
        for _ in range(40):
            spec = LatticeSpec(rng.randint(2, 6), rng.randint(2, 6), 36)
            p = rng.random()
            out = relocate_sweep(build_lattice(spec, 50), params(p, spec), make_rng(rng.getrandbits(32)))
            assert out.is_connected()
            assert min(out.degree(v) for v in out.nodes()) >= 1
            for u, v, kind in out.edges():
                assert kind is EdgeKind.SPATIAL
                assert out.euclidean_distance(u, v) <= 50
            # the result is exactly the unit-disk graph of its positions
            for u, v in itertools.combinations(out.nodes(), 2):
                assert out.has_edge(u, v) == out.in_range(u, v)


class TestFamily:
    def test_p_zero_single_run(self):
        fam = construct_family(SPEC, 50, [0.0], 1, master_seed=3)
        assert len(fam) == 1
        assert fam[0][2] == build_lattice(SPEC, 50)

    def test_shape_and_determinism(self):
        a = construct_family(LatticeSpec(4, 4, 36), 50, [0.0, 0.5, 1.0], 3, master_seed=9)
        b = construct_family(LatticeSpec(4, 4, 36), 50, [0.0, 0.5, 1.0], 3, master_seed=9)
        assert [(p, r) for p, r, _ in a] == [(p, r) for p in (0.0, 0.5, 1.0) for r in range(3)]
        assert [dumps(g) for *_, g in a] == [dumps(g) for *_, g in b]
        c = construct_family(LatticeSpec(4, 4, 36), 50, [0.0, 0.5, 1.0], 3, master_seed=10)
        assert [dumps(g) for *_, g in a] != [dumps(g) for *_, g in c]

    def test_default_p_values(self):
        ps = default_p_values()
        assert len(ps) == 21 and ps[0] == 0.0 and ps[-1] == 1.0
        assert ps[10] == 0.5

    def test_mean_degree_at_p1_in_calibration_band(self):
        fam = construct_family(SPEC, 50, [1.0], 25, master_seed=2006)
        mean_k = statistics.mean(g.average_degree() for *_, g in fam)
        assert 6.0 <= mean_k <= 9.0


class TestPartitionPair:
    def test_default_scenario(self):
        sc = build_partition_pair(LatticeSpec(5, 10, 36), 50, 150, master_seed=1)
        g = sc.joined()
        assert g.n == 100
        assert list(sc.left_ids) == list(range(50)) and list(sc.right_ids) == list(range(50, 100))
        assert sc.left.is_connected() and sc.right.is_connected()
        assert not g.is_connected()
        assert all(u < 50 and v < 50 or u >= 50 and v >= 50 for u, v, _ in g.edges())
        for u in sc.left_ids:
            for v in sc.right_ids:
                assert g.euclidean_distance(u, v) >= 150 - 1e-9
        left_xmax = max(g.position(v).x for v in sc.left_ids)
        right_xmin = min(g.position(v).x for v in sc.right_ids)
        assert right_xmin - left_xmax == pytest.approx(150)

    def test_deterministic(self):
        a = build_partition_pair(LatticeSpec(5, 10, 36), 50, 150, master_seed=4)
        b = build_partition_pair(LatticeSpec(5, 10, 36), 50, 150, master_seed=4)
        assert dumps(a.joined()) == dumps(b.joined())

    def test_partitions_differ(self):
        sc = build_partition_pair(LatticeSpec(5, 10, 36), 50, 150, master_seed=4)
        assert [p.y for p in sc.left.positions] != [p.y for p in sc.right.positions]

    def test_gap_must_exceed_range(self):
        with pytest.raises(GraphError):
            build_partition_pair(LatticeSpec(5, 10, 36), 50, 50, master_seed=0)

    def test_joined_returns_copies(self):
        sc = build_partition_pair(LatticeSpec(2, 3, 36), 50, 150, master_seed=0)
        g = sc.joined()
        g.add_edge(0, 6, EdgeKind.BYPASS)
        assert sc.joined().num_edges(EdgeKind.BYPASS) == 0

    def test_scenario_validation(self):
        left = build_lattice(LatticeSpec(1, 2, 36), 50)
        right = build_lattice(LatticeSpec(1, 2, 36), 50)
        with pytest.raises(GraphError, match="in range"):
            PartitionScenario(left, right, gap=100)
