import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nlgap.graphs import cycle_graph, path_graph
from nlgap.metrics import (MetricError, aspect_ratio, cost_matrix,
                           is_well_conditioned, lift_assignment, linf_grid,
                           path_metric, random_euclidean_metric, snowflake,
                           uniform_metric, validate, well_conditioned_reduction)


class TestValidate:
    def test_two_points(self):
        m = validate([[0, 1], [1, 0]])
        assert m.size == 2

    def test_triangle_violation_named(self):
        with pytest.raises(MetricError) as err:
            validate([[0, 1, 3], [1, 0, 1], [3, 1, 0]])
        assert err.value.kind == "triangle"
        i, k, j = err.value.indices
        assert {i, k} == {0, 2} and j == 1

    def test_asymmetry_named(self):
        with pytest.raises(MetricError) as err:
            validate([[0, 1], [2, 0]])
        assert err.value.kind == "asymmetry"

    def test_zero_off_diagonal_named(self):
        with pytest.raises(MetricError) as err:
            validate([[0, 0], [0, 0]])
        assert err.value.kind == "zero-off-diagonal"

    def test_negative_named(self):
        with pytest.raises(MetricError) as err:
            validate([[0, -1], [-1, 0]])
        assert err.value.kind == "negative"

    def test_path_metrics_are_valid(self, corpus):
        for name, g in corpus.items():
            path_metric(g)  # validates internally


class TestSnowflake:
    def test_square_root(self):
        m = validate([[0, 4], [4, 0]])
        assert snowflake(m, 0.5).dist[0, 1] == pytest.approx(2.0)

    def test_tiny_eps_is_identity(self):
        m = random_euclidean_metric(5, seed=3)
        out = snowflake(m, 1e-9)
        assert np.abs(out.dist - m.dist).max() < 1e-6

    def test_uniform_unchanged(self):
        m = uniform_metric(4)
        assert (snowflake(m, 0.3).dist == m.dist).all()

    def test_eps_out_of_range(self):
        with pytest.raises(MetricError):
            snowflake(uniform_metric(3), 1.0)

    @given(st.integers(0, 10 ** 6), st.floats(0.01, 0.99))
    @settings(max_examples=200, deadline=None)
    def test_always_validates(self, seed, eps):
        m = random_euclidean_metric(5, seed=seed)
        snowflake(m, eps)  # raises on any axiom failure


class TestAspectRatio:
    def test_three_collinear_points(self):
        m = validate([[0, 1, 3], [1, 0, 2], [3, 2, 0]])
        assert aspect_ratio(m) == pytest.approx(3.0)
        assert is_well_conditioned(m)

    def test_two_point_spaces_always_well_conditioned(self):
        # one positive distance, so the aspect ratio is 1 <= e^2
        m = validate([[0, math.exp(3)], [math.exp(3), 0]])
        assert aspect_ratio(m) == 1.0
        assert is_well_conditioned(m)

    def test_threshold_is_exp_of_size(self):
        # aspect ratio e^4 > e^3 fails the bound at N=3
        big = math.exp(4)
        m = validate([[0, 1, big], [1, 0, big], [big, big, 0]])
        assert aspect_ratio(m) == pytest.approx(big)
        assert not is_well_conditioned(m)

    def test_graph_metrics_well_conditioned(self, corpus):
        for g in corpus.values():
            assert is_well_conditioned(path_metric(g))


class TestGridAndUniform:
    def test_grid_line(self):
        m = linf_grid(1, 1)
        assert m.size == 3
        i = m.labels.index((-1,))
        j = m.labels.index((1,))
        assert m.dist[i, j] == 2

    def test_grid_sup_norm(self):
        m = linf_grid(2, 2)
        i = m.labels.index((0, 0))
        j = m.labels.index((1, 2))
        assert m.dist[i, j] == 2

    def test_grid_nine_points(self):
        m = linf_grid(1, 2)
        assert m.size == 9
        assert m.diam() == 2

    def test_grid_cap(self):
        with pytest.raises(MetricError):
            linf_grid(10, 10, point_cap=10 ** 6)

    def test_uniform(self):
        m = uniform_metric(3)
        assert (m.dist[~np.eye(3, dtype=bool)] == 1).all()

    def test_path_metric_c4(self):
        assert path_metric(cycle_graph(4)).diam() == 2

    def test_path_metric_p3(self):
        m = path_metric(path_graph(3))
        assert aspect_ratio(m) == pytest.approx(2.0)
        assert is_well_conditioned(m)

    def test_disconnected_rejected(self):
        from nlgap.graphs import disjoint_union
        g = disjoint_union(path_graph(2), path_graph(2))
        with pytest.raises(MetricError):
            path_metric(g)


class TestCostMatrix:
    def test_power_monotone_below_one(self):
        m = random_euclidean_metric(5, seed=2)
        scaled = validate(m.dist / m.dist.max())
        for p, q in [(1, 2), (1.5, 3), (2, 2.5)]:
            cp = cost_matrix(scaled, p).values
            cq = cost_matrix(scaled, q).values
            assert (cq <= cp + 1e-12).all()


class TestReduction:
    def test_within_cluster_formula(self):
        m = uniform_metric(2)
        red = well_conditioned_reduction(m, 2)
        assert red.metric.dist[0, 1] == pytest.approx(min(4, 1 + 0.25))

    def test_cross_cluster_distance(self):
        m = validate([[0, 1, 2], [1, 0, 1], [2, 1, 0]])
        red = well_conditioned_reduction(m, 3)
        assert len(red.taus) == 2
        assert red.metric.dist[0, red.base_size] == 9.0

    def test_single_scale_two_points(self):
        red = well_conditioned_reduction(uniform_metric(2), 2)
        assert red.metric.size == 2
        assert aspect_ratio(red.metric) <= 16

    def test_size_and_aspect_bounds(self):
        for seed in range(8):
            m = random_euclidean_metric(2 + seed % 3, seed=seed)
            n = 2 + seed % 4
            red = well_conditioned_reduction(m, n)
            big_n = m.size
            assert big_n <= red.metric.size <= big_n ** 3
            assert red.metric.diam() <= n * n + 1e-12
            assert red.metric.min_distance() >= 1 / (n * n) - 1e-12
            assert aspect_ratio(red.metric) <= n ** 4 + 1e-9

    def test_lift_constant_rejected(self):
        m = uniform_metric(2)
        red = well_conditioned_reduction(m, 2)
        with pytest.raises(MetricError):
            lift_assignment((0, 0), m, red)

    def test_lift_lands_in_max_scale_cluster(self):
        m = validate([[0, 1, 3], [1, 0, 2], [3, 2, 0]])
        red = well_conditioned_reduction(m, 4)
        lifted = lift_assignment((0, 1, 2, 0), m, red)
        cluster = red.taus.index(3.0)
        assert all(cluster * 3 <= x < (cluster + 1) * 3 for x in lifted)

    def test_lift_two_point_image(self):
        m = validate([[0, 5, 7], [5, 0, 4], [7, 4, 0]])
        red = well_conditioned_reduction(m, 3)
        lifted = lift_assignment((0, 1, 0), m, red)
        cluster = red.taus.index(5.0)
        assert lifted == [red.flat_index(cluster, 0), red.flat_index(cluster, 1),
                          red.flat_index(cluster, 0)]


class TestLiftRatioComparison:
    def test_factor_two_map_inequality_exhaustive(self):
        """Every non-constant map of a small connected graph satisfies the
        per-map two-sided comparison after lifting: the edge-to-pair cost
        ratio at most doubles."""
        from nlgap.graphs import graph_from_edges
        graphs = [path_graph(3), cycle_graph(4), cycle_graph(5),
                  graph_from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 2)])]
        metrics = [uniform_metric(2), uniform_metric(3),
                   random_euclidean_metric(3, seed=11)]
        for g in graphs:
            gd_pairs = None
            for m in metrics:
                red = well_conditioned_reduction(m, g.n)
                for assign in itertools.product(range(m.size), repeat=g.n):
                    if len(set(assign)) <= 1:
                        continue
                    lifted = lift_assignment(assign, m, red)
                    base_edges = sum(m.dist[assign[u], assign[v]] for u, v in g.edges)
                    base_pairs = sum(m.dist[assign[u], assign[v]]
                                     for u in range(g.n) for v in range(g.n))
                    red_edges = sum(red.metric.dist[lifted[u], lifted[v]] for u, v in g.edges)
                    red_pairs = sum(red.metric.dist[lifted[u], lifted[v]]
                                    for u in range(g.n) for v in range(g.n))
                    assert red_edges / red_pairs <= 2 * base_edges / base_pairs + 1e-12
