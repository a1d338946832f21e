"""
Unit tests for hierarchical and mixed graphs.

Core claims:
    - build_dag accepts only edges in linear extension ordering
    - add_reverse_edges accepts only edges pointing against the ordering
    - laplacian splits into the DAG part and the reverse-edge part, with theta/phi/span
    - assumption_params reports exact neighbor counts and weight maxima
    - has_spanning_tree follows information flow (parent -> child)
    - generators are deterministic for a fixed seed and respect their caps
"""

import numpy as np
import pytest
from pytest import approx

from src.errors import (
    DuplicateEdge,
    DuplicateReverseEdge,
    EdgeOrderViolation,
    GraphError,
    InfeasibleReverseCount,
    NonPositiveWeight,
    ReverseOrderViolation,
    TooFewVertices,
    VertexOutOfRange,
)
from src.graph import (
    add_reverse_edges,
    assumption_params,
    build_dag,
    gen_path,
    gen_path_reverse,
    gen_random_mixed,
    gen_star,
    gen_star_mixed,
    has_spanning_tree,
    laplacian,
)


# == 1. build_dag ===========================================================

class TestBuildDag:
    def test_path_adjacency_is_strictly_lower_triangular(self):
        g = build_dag(3, [(2, 1, 1.0), (3, 2, 1.0)])
        A = g.adjacency()
        assert np.array_equal(A, np.tril(A, k=-1))
        assert A[1, 0] == 1.0 and A[2, 1] == 1.0

    def test_edgeless_dag_is_valid(self):
        g = build_dag(3, [])
        assert g.dag_edges == ()

    def test_edges_are_stored_in_canonical_order(self):
        g = build_dag(4, [(4, 1, 1.0), (2, 1, 0.5), (3, 2, 2.0)])
        assert g.dag_edges == ((2, 1, 0.5), (3, 2, 2.0), (4, 1, 1.0))

    def test_ordering_violation(self):
        with pytest.raises(EdgeOrderViolation):
            build_dag(4, [(2, 1, 1.0), (1, 2, 1.0)])

    def test_self_loop_is_an_ordering_violation(self):
        with pytest.raises(EdgeOrderViolation):
            build_dag(3, [(2, 2, 1.0)])

    def test_too_few_vertices(self):
        with pytest.raises(TooFewVertices):
            build_dag(2, [(2, 1, 1.0)])

    def test_vertex_out_of_range(self):
        with pytest.raises(VertexOutOfRange):
            build_dag(3, [(4, 1, 1.0)])

    @pytest.mark.parametrize("weight", [0.0, -1.0, float("inf"), float("nan")])
    def test_non_positive_or_non_finite_weight(self, weight):
        with pytest.raises(NonPositiveWeight):
            build_dag(3, [(2, 1, weight)])

    def test_duplicate_edge(self):
        with pytest.raises(DuplicateEdge):
            build_dag(3, [(2, 1, 1.0), (2, 1, 2.0)])

    def test_graph_errors_are_value_errors(self):
        with pytest.raises(ValueError):
            build_dag(3, [(1, 3, 1.0)])


# == 2. add_reverse_edges ===================================================

class TestAddReverseEdges:
    def test_path_plus_full_span_edge_is_a_ring(self):
        m = add_reverse_edges(gen_path(6), [(1, 6, 1.0)])
        flow = m.info_flow_graph()
        # every vertex has exactly one sender and one receiver
        assert all(flow.in_degree(v) == 1 and flow.out_degree(v) == 1 for v in flow.nodes)

    def test_empty_reverse_set_keeps_dag_laplacian(self):
        m = add_reverse_edges(gen_path(4), [])
        d = laplacian(m)
        assert np.array_equal(d.L_total, d.L_dag)
        assert not d.P.any()

    def test_forward_edge_is_rejected(self):
        with pytest.raises(ReverseOrderViolation):
            add_reverse_edges(gen_path(3), [(3, 1, 1.0)])

    def test_duplicate_reverse_edge(self):
        with pytest.raises(DuplicateReverseEdge):
            add_reverse_edges(gen_path(3), [(1, 3, 1.0), (1, 3, 0.5)])

    def test_two_cycle_with_dag_edge_is_allowed(self):
        m = add_reverse_edges(gen_path(3), [(1, 2, 1.0)])
        assert m.reverse_edges == ((1, 2, 1.0),)

    def test_mixed_adjacency_combines_both_parts(self, star4):
        A = star4.adjacency()
        assert A[0, 2] == 2.0 and A[1, 3] == 0.5
        assert A[1:, 0].tolist() == [1.0, 1.0, 1.0]


# == 3. laplacian ===========================================================

class TestLaplacian:
    def test_path_laplacian(self, path3):
        d = laplacian(path3)
        assert d.L_total.tolist() == [[0, 0, 0], [-1, 1, 0], [0, -1, 1]]
        assert d.theta is None and d.phi is None and d.span is None

    def test_ring_span_and_first_row(self, ring6):
        d = laplacian(ring6)
        assert (d.theta, d.phi, d.span) == (1, 6, 5)
        assert d.L_total[0].tolist() == [1, 0, 0, 0, 0, -1]

    def test_dag_diagonal_is_in_degrees(self, star4):
        d = laplacian(star4)
        assert star4.base.in_degrees().tolist() == [0.0, 1.0, 1.0, 1.0]
        assert np.array_equal(np.diag(d.L_dag), star4.base.in_degrees())

    def test_row_sums_are_zero(self, star4):
        d = laplacian(star4)
        assert np.allclose(d.L_total.sum(axis=1), 0.0)

    def test_blocks_cover_reverse_range(self):
        m = gen_path_reverse(7, q=3, m=5)
        d = laplacian(m)
        blocks = d.blocks()
        assert blocks["L1"].shape == (2, 2)
        assert blocks["Theta"].shape == (3, 3)
        assert blocks["Delta"].shape == (3, 3)
        assert blocks["L2"].shape == (2, 2)
        # the only reverse entry lands inside Delta
        assert blocks["Delta"][0, 2] == -1.0
        assert np.abs(blocks["Delta"]).sum() == approx(np.abs(d.P).sum())

    def test_blocks_need_reverse_edges(self, path3):
        with pytest.raises(GraphError):
            laplacian(path3).blocks()


# == 4. assumption_params ===================================================

class TestAssumptionParams:
    def test_ring(self, ring6):
        p = assumption_params(ring6)
        assert (p.zeta, p.xi, p.a_bar, p.a_bar_r, p.d_max) == (1, 1, 1.0, 1.0, 1.0)

    def test_edgeless(self):
        p = assumption_params(add_reverse_edges(build_dag(3, []), []))
        assert (p.zeta, p.xi, p.a_bar, p.a_bar_r) == (0, 0, 0.0, 0.0)

    def test_star_with_reverse_edges(self, star4):
        p = assumption_params(star4)
        assert (p.zeta, p.xi, p.a_bar, p.a_bar_r, p.d_max) == (1, 1, 1.0, 2.0, 1.0)


# == 5. has_spanning_tree ===================================================

class TestSpanningTree:
    @pytest.mark.parametrize("n", [3, 5, 20])
    def test_path(self, n):
        assert has_spanning_tree(add_reverse_edges(gen_path(n), []))

    def test_edgeless(self):
        assert not has_spanning_tree(add_reverse_edges(build_dag(3, []), []))

    def test_two_disjoint_paths(self):
        g = build_dag(4, [(2, 1, 1.0), (4, 3, 1.0)])
        assert not has_spanning_tree(add_reverse_edges(g, []))

    def test_ring_without_sources(self, ring6):
        assert has_spanning_tree(ring6)

    def test_reverse_edge_can_supply_the_root(self):
        # 3 feeds 1 backwards, 1 feeds 2: vertex 3 has no sender and reaches everyone
        g = build_dag(3, [(2, 1, 1.0)])
        assert has_spanning_tree(add_reverse_edges(g, [(1, 3, 1.0)]))


# == 6. Generators ==========================================================

class TestGenerators:
    def test_gen_path(self):
        assert gen_path(3, 1.0).dag_edges == ((2, 1, 1.0), (3, 2, 1.0))

    def test_gen_path_too_small(self):
        with pytest.raises(TooFewVertices):
            gen_path(2, 1.0)

    def test_gen_star(self):
        assert gen_star(4, 1.0).dag_edges == ((2, 1, 1.0), (3, 1, 1.0), (4, 1, 1.0))

    def test_gen_path_reverse_default_is_full_span(self):
        m = gen_path_reverse(6)
        assert m.reverse_edges == ((1, 6, 1.0),)

    def test_random_is_deterministic(self):
        a = gen_random_mixed(12, 0.3, 8, (0.1, 2.0), seed=42)
        b = gen_random_mixed(12, 0.3, 8, (0.1, 2.0), seed=42)
        assert a == b

    def test_random_seeds_differ(self):
        a = gen_random_mixed(12, 0.3, 8, (0.1, 2.0), seed=1)
        b = gen_random_mixed(12, 0.3, 8, (0.1, 2.0), seed=2)
        assert a != b

    def test_random_without_reverse_edges_has_real_spectrum(self):
        m = gen_random_mixed(10, 0.5, 0, (0.1, 2.0), seed=3)
        eig = np.linalg.eigvals(laplacian(m).L_total)
        assert np.abs(eig.imag).max() == approx(0.0, abs=1e-9)

    def test_random_always_has_spanning_tree(self):
        for seed in range(20):
            assert has_spanning_tree(gen_random_mixed(8, 0.2, 5, (0.1, 2.0), seed=seed))

    def test_infeasible_reverse_count(self):
        with pytest.raises(InfeasibleReverseCount):
            gen_random_mixed(5, 0.3, 11, (0.1, 2.0), seed=0)

    def test_random_respects_caps(self):
        for seed in range(10):
            m = gen_random_mixed(30, 0.8, 90, (0.5, 1.5), seed=seed, max_superior=2, max_inferior=3)
            p = assumption_params(m)
            assert p.zeta <= 2
            assert p.xi <= 3
            assert 0.5 <= p.a_bar <= 1.5

    @pytest.mark.parametrize("bounds", [(0.0, 1.0), (2.0, 1.0)])
    def test_bad_weight_bounds(self, bounds):
        with pytest.raises(GraphError):
            gen_random_mixed(5, 0.3, 1, bounds, seed=0)

    def test_star_mixed_keeps_star_dag(self):
        m = gen_star_mixed(8, 1.5, 4, (0.1, 2.0), seed=9)
        assert m.dag_edges == gen_star(8, 1.5).dag_edges
        assert len(m.reverse_edges) == 4
        assert all(c < p for c, p, _ in m.reverse_edges)
