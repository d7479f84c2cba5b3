"""Ball coverings, covering validation, restricted norms and the lower bound."""

import math
import os

import numpy as np
import pytest

import magspec as ms
from conftest import (cycle_graph, path_graph, random_connected_graph,
                      random_gauge, random_potential)

SQRT2 = math.sqrt(2.0)


def test_declared_degree_formula_values():
    assert ms.ball_degree_bound(3, 1) == 4
    assert ms.ball_degree_bound(4, 1) == 5
    assert ms.ball_degree_bound(5, 1) == 6
    assert ms.ball_degree_bound(3, 2) == 10
    assert ms.ball_degree_bound(4, 2) == 17
    assert ms.ball_degree_bound(5, 2) == 26
    # degree-2 graphs use the direct count
    assert ms.ball_degree_bound(2, 1) == 3
    assert ms.ball_degree_bound(2, 3) == 7


def test_ball_covering_on_random_bounded_degree_graphs_is_good():
    rng = np.random.default_rng(7)
    for _ in range(15):
        n_bound = int(rng.integers(3, 6))
        g = random_connected_graph(rng, n=int(rng.integers(5, 25)),
                                   max_degree=n_bound)
        for k in (1, 2):
            cover = ms.ball_covering(g, k)
            check = ms.validate_covering(g, cover)
            assert check.is_good
            assert check.max_multiplicity <= cover.degree
            assert not check.uncovered_edges
            assert not check.uncovered_vertices


def test_every_ball_contains_its_center_and_both_edge_endpoints():
    rng = np.random.default_rng(13)
    g = random_connected_graph(rng, n=16, max_degree=4)
    cover = ms.ball_covering(g, 1)
    assert len(cover.subgraphs) == g.n_vertices
    for center, sub in zip(g.vertex_ids, cover.subgraphs):
        assert center in sub.vertices
    # each edge lies in the balls of both endpoints: multiplicity >= 2
    for key in g.edge_keys:
        count = sum(1 for sub in cover.subgraphs if key in sub.edges)
        assert count >= 2


def test_degenerate_ball_covering_covers_everything():
    g = cycle_graph(4)
    cover = ms.ball_covering(g, 5)  # radius beyond the diameter
    for sub in cover.subgraphs:
        assert sub.vertices == frozenset(g.vertex_ids)
    check = ms.validate_covering(g, cover)
    assert check.max_multiplicity == g.n_vertices
    # the degree-2 direct count 2k+1 still bounds the multiplicity
    assert check.is_good


def test_covering_with_a_missing_edge_is_flagged():
    g = cycle_graph(4)
    subs = (ms.Subgraph(frozenset({0, 1}), frozenset({(0, 1)})),
            ms.Subgraph(frozenset({1, 2}), frozenset({(1, 2)})),
            ms.Subgraph(frozenset({2, 3}), frozenset({(2, 3)})),
            ms.Subgraph(frozenset({0, 3}), frozenset()))
    cover = ms.GoodCovering(subs, degree=2)
    check = ms.validate_covering(g, cover)
    assert not check.is_good
    assert check.uncovered_edges == [(0, 3)]


def test_disconnected_member_is_flagged():
    g = path_graph(4)
    subs = (ms.Subgraph(frozenset({0, 1, 3}), frozenset({(0, 1)})),
            ms.Subgraph(frozenset(g.vertex_ids), frozenset(g.edge_keys)))
    cover = ms.GoodCovering(subs, degree=2)
    assert not ms.validate_covering(g, cover).is_good


def test_ladder_square_covering_has_degree_two():
    g, _ = ms.truncate(ms.ladder_family(ms.LadderParams(1.5, 0.5)), 8)
    cover = ms.ladder_square_covering(g)
    assert cover.degree == 2
    check = ms.validate_covering(g, cover)
    assert check.is_good
    assert check.max_multiplicity == 2


# ---------------------------------------------------------------------------
# restricted field norms
# ---------------------------------------------------------------------------

def test_tree_shaped_member_has_zero_norm():
    rng = np.random.default_rng(19)
    g = random_connected_graph(rng, n=12, extra_edges=0.0)  # a tree
    cover = ms.ball_covering(g, 1)
    for sub in cover.subgraphs:
        assert abs(ms.restricted_field_norm(g, sub)) <= 1e-12


def test_ladder_square_norm_at_max_flux():
    g, _ = ms.truncate(ms.ladder_family(ms.LadderParams(1.0, 0.5)), 6)
    for sub in ms.ladder_square_covering(g).subgraphs:
        assert ms.restricted_field_norm(g, sub) == pytest.approx(
            2.0 - SQRT2, abs=1e-10)


def test_restricted_norm_is_invariant_under_ambient_gauges():
    rng = np.random.default_rng(23)
    g = random_connected_graph(rng, n=18, max_degree=4)
    alpha = random_potential(rng, g)
    moved = ms.apply_gauge(alpha, random_gauge(rng, g))
    for sub in ms.ball_covering(g, 1).subgraphs:
        a = ms.restricted_field_norm(g, sub, alpha)
        b = ms.restricted_field_norm(g, sub, moved)
        assert abs(a - b) <= 1e-10


def test_restricted_norm_rejects_disconnected_members():
    g = path_graph(4)
    sub = ms.Subgraph(frozenset({0, 3}), frozenset())
    with pytest.raises(ms.DisconnectedSubgraph):
        ms.restricted_field_norm(g, sub)


# ---------------------------------------------------------------------------
# effective potential
# ---------------------------------------------------------------------------

def test_flux_free_potential_gives_zero_weights():
    rng = np.random.default_rng(29)
    g = random_connected_graph(rng, n=14, max_degree=4, random_alpha=False)
    potential = ms.effective_potential(g, ms.ball_covering(g, 1))
    assert all(abs(w) <= 1e-12 for w in potential.values.values())


def test_single_member_covering_of_the_twisted_square():
    g = cycle_graph(4, flux=math.pi)
    whole = ms.Subgraph.induced(g, g.vertex_ids)
    cover = ms.GoodCovering((whole,), degree=1)
    potential = ms.effective_potential(g, cover)
    for x in g.vertex_ids:
        assert potential[x] == pytest.approx(2.0 - SQRT2, abs=1e-12)
        assert len(potential.breakdown[x]) == 1


def test_ladder_interior_weights_dominate_the_simplified_value():
    params = ms.LadderParams(1.0, 0.5)
    g, _ = ms.truncate(ms.ladder_family(params), 10)
    potential = ms.effective_potential(g, ms.ladder_square_covering(g))
    for l in range(2, 10):
        w = potential[ms.ladder_vertex_id(l, 1)]
        expected = 0.5 * (2.0 - SQRT2) * (params.edge_weight(l - 1)
                                          + params.edge_weight(l))
        assert w == pytest.approx(expected, rel=1e-10)
        assert w >= (1.0 - SQRT2 / 2.0) * params.edge_weight(l) - 1e-12


def test_weights_grow_monotonically_with_edge_weights():
    rng = np.random.default_rng(31)
    g = random_connected_graph(rng, n=12, max_degree=4)
    cover = ms.ball_covering(g, 1)
    base = ms.effective_potential(g, cover)
    # double one edge weight; no W may decrease
    key = g.edge_keys[len(g.edge_keys) // 2]
    bumped_c = dict(g.c)
    bumped_c[key] = 2.0 * bumped_c[key]
    bumped = ms.WeightedGraph(g.vertex_ids, g.omega, bumped_c, g.alpha,
                              g.adjacency)
    after = ms.effective_potential(bumped, cover)
    for x in g.vertex_ids:
        assert after[x] >= base[x] - 1e-12


def test_effective_potential_is_gauge_invariant():
    rng = np.random.default_rng(37)
    g = random_connected_graph(rng, n=14, max_degree=4)
    alpha = random_potential(rng, g)
    moved = ms.apply_gauge(alpha, random_gauge(rng, g))
    cover = ms.ball_covering(g, 1)
    w1 = ms.effective_potential(g, cover, alpha)
    w2 = ms.effective_potential(g, cover, moved)
    for x in g.vertex_ids:
        assert abs(w1[x] - w2[x]) <= 1e-10


def test_effective_potential_rejects_bad_coverings():
    g = cycle_graph(4)
    cover = ms.GoodCovering(
        (ms.Subgraph(frozenset({0, 1}), frozenset({(0, 1)})),), degree=1)
    with pytest.raises(ms.GraphError):
        ms.effective_potential(g, cover)


def test_thread_pool_reduction_is_deterministic():
    rng = np.random.default_rng(41)
    g = random_connected_graph(rng, n=16, max_degree=4)
    cover = ms.ball_covering(g, 1)
    serial = ms.effective_potential(g, cover)
    os.environ["MAGSPEC_THREADS"] = "4"
    try:
        threaded = ms.effective_potential(g, cover)
    finally:
        del os.environ["MAGSPEC_THREADS"]
    assert serial.values == threaded.values


# ---------------------------------------------------------------------------
# the lower bound
# ---------------------------------------------------------------------------

def test_zero_vector_has_zero_slack():
    g = cycle_graph(4, flux=math.pi)
    whole = ms.GoodCovering((ms.Subgraph.induced(g, g.vertex_ids),), degree=1)
    potential = ms.effective_potential(g, whole)
    f = np.zeros(4, dtype=complex)
    assert ms.dirichlet_bound_check(g, potential, f) == 0.0


def test_indicator_slack_on_the_twisted_square():
    g = cycle_graph(4, flux=math.pi)
    whole = ms.GoodCovering((ms.Subgraph.induced(g, g.vertex_ids),), degree=1)
    potential = ms.effective_potential(g, whole)
    delta = np.zeros(4, dtype=complex)
    delta[0] = 1.0
    slack = ms.dirichlet_bound_check(g, potential, delta)
    assert slack == pytest.approx(SQRT2, abs=1e-10)


def test_lower_bound_holds_for_random_vectors():
    # vertex weights <= 1: the regime in which the omega^2-weighted bound holds
    rng = np.random.default_rng(43)
    for _ in range(25):
        g = random_connected_graph(rng, n=int(rng.integers(5, 22)), max_degree=5,
                                   omega_range=(0.1, 1.0))
        k = int(rng.integers(1, 3))
        potential = ms.effective_potential(g, ms.ball_covering(g, k))
        f = rng.standard_normal(g.n_vertices) + 1j * rng.standard_normal(g.n_vertices)
        q = ms.quadratic_form(g, f)
        slack = ms.dirichlet_bound_check(g, potential, f)
        assert slack >= -1e-10 * max(1.0, q)


def test_lower_bound_without_the_weight_factor_holds_for_any_weights():
    # the flat-norm variant of the bound has no weight restriction
    rng = np.random.default_rng(47)
    for _ in range(25):
        g = random_connected_graph(rng, n=int(rng.integers(5, 22)), max_degree=5)
        potential = ms.effective_potential(g, ms.ball_covering(g, 1))
        f = rng.standard_normal(g.n_vertices) + 1j * rng.standard_normal(g.n_vertices)
        q = ms.quadratic_form(g, f)
        flat_bound = sum(potential[x] * abs(f[g.index(x)]) ** 2
                         for x in g.vertex_ids)
        assert q - flat_bound >= -1e-10 * max(1.0, q)
