import numpy as np
import pytest

from mori.errors import UndefinedClusteringError
from mori.model import ModelParams, generate, multigraph_from_edges
from mori.oracle import (
    brute_adjacent_pair_count,
    brute_degenerate_pair_count,
    brute_max_degree,
    brute_triangle_count,
)
from mori.stats import (
    adjacent_pair_count,
    clustering_coefficient,
    compute_stats,
    degenerate_pair_count,
    max_degree,
    triangle_count,
)

from conftest import random_multigraph, rng_of


def test_simple_triangle(triangle_graph):
    assert triangle_count(triangle_graph) == 1
    assert adjacent_pair_count(triangle_graph) == 3
    assert degenerate_pair_count(triangle_graph) == 0
    assert clustering_coefficient(triangle_graph) == 1.0


@pytest.mark.parametrize("m", [1, 2, 3, 5])
def test_m_fold_triangle_matches_closed_form(m, m_triangle_factory):
    g = m_triangle_factory(m)
    assert triangle_count(g) == m**3
    assert adjacent_pair_count(g) == 3 * (2 * m) * (2 * m - 1) // 2
    assert clustering_coefficient(g) == pytest.approx(m * m / (2 * m - 1))


def test_m2_triangle_hand_counts(m_triangle_factory):
    g = m_triangle_factory(2)
    assert triangle_count(g) == 8
    assert adjacent_pair_count(g) == 18
    assert clustering_coefficient(g) == pytest.approx(4 / 3)


def test_trees_have_no_triangles():
    for seed in range(5):
        g = generate(ModelParams(30, 1, 1.0), seed)
        assert triangle_count(g) == 0
        assert clustering_coefficient(g) == 0.0


def test_single_loop_vertex():
    g = multigraph_from_edges([(1, 1)], 1)
    assert triangle_count(g) == 0
    assert adjacent_pair_count(g) == 1
    assert degenerate_pair_count(g) == 1
    assert max_degree(g) == 2


def test_parallel_pair_is_degenerate_both_ends():
    g = multigraph_from_edges([(2, 1), (2, 1)], 2)
    assert degenerate_pair_count(g) == 2
    assert adjacent_pair_count(g) == 2


def test_path_counts():
    g = multigraph_from_edges([(2, 1), (3, 2)], 3)
    assert adjacent_pair_count(g) == 1
    assert degenerate_pair_count(g) == 0


def test_clustering_undefined():
    g = multigraph_from_edges([], 1)
    with pytest.raises(UndefinedClusteringError):
        clustering_coefficient(g)
    s = compute_stats(g)
    assert s.clustering is None and not s.clustering_defined


def test_compute_stats_loop_graph():
    g = generate(ModelParams(1, 2, 1.0), 5)
    s = compute_stats(g)
    assert (s.triangles, s.adjacent_pairs, s.clustering, s.max_degree) == (0, 1, 0.0, 2)
    assert s.degenerate_pairs == 1
    assert (s.n, s.m, s.beta, s.seed) == (1, 2, 1.0, 5)


def test_compute_stats_is_pure():
    g = generate(ModelParams(20, 2, 0.7), 3)
    assert compute_stats(g) == compute_stats(g)


def test_matches_brute_force_on_random_multigraphs():
    rng = rng_of(20240809)
    for _ in range(60):
        g = random_multigraph(rng)
        edges = g.edges
        assert triangle_count(g) == brute_triangle_count(g.n, edges)
        assert adjacent_pair_count(g) == brute_adjacent_pair_count(g.n, edges)
        assert degenerate_pair_count(g) == brute_degenerate_pair_count(g.n, edges)
        assert max_degree(g) == brute_max_degree(g.n, edges)


def test_clustering_bound_on_process_graphs():
    # 3N <= m D on every generated graph
    for m in (1, 2, 3):
        for seed in range(4):
            g = generate(ModelParams(25, m, 1.0), seed)
            s = compute_stats(g)
            assert 3 * s.triangles <= m * s.adjacent_pairs
            if s.clustering is not None:
                assert 0.0 <= s.clustering <= m


def test_removing_loops_keeps_triangles():
    rng = rng_of(77)
    for _ in range(20):
        g = random_multigraph(rng, n_max=25)
        kept = [(a, b) for a, b in g.edges if a != b]
        g2 = multigraph_from_edges(kept, g.n)
        assert triangle_count(g2) == triangle_count(g)
        if g.edge_count != len(kept):
            assert adjacent_pair_count(g2) <= adjacent_pair_count(g)


def test_csv_row_matches_header():
    from mori.stats import CSV_HEADER

    s = compute_stats(generate(ModelParams(5, 2, 1.0), 1))
    row = s.to_csv_row()
    assert len(row.split(",")) == len(CSV_HEADER.split(","))
    d = s.to_dict()
    assert list(d) == CSV_HEADER.split(",")
