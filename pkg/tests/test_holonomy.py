"""Spanning trees, cycle bases, holonomy and gauge reduction."""

import math

import numpy as np
import pytest

import magspec as ms
from conftest import (cycle_graph, path_graph, random_connected_graph,
                      random_gauge, random_potential)

TAU = 2.0 * math.pi


def test_tree_input_has_no_chords():
    g = path_graph(6)
    tree = ms.spanning_tree(g, root=0)
    assert tree.edges == frozenset(g.edge_keys)
    assert len(ms.cycle_basis(g, tree)) == 0


def test_cycle_graph_has_one_chord():
    g = cycle_graph(7)
    basis = ms.cycle_basis(g)
    assert len(basis) == 1
    (cyc,) = basis.cycles.values()
    assert len(cyc.pairs) == 7


def test_complete_graph_k4_has_three_basis_cycles():
    g = ms.build_graph([(i, 1.0) for i in range(4)],
                       [(i, j, 1.0) for i in range(4) for j in range(i + 1, 4)])
    assert len(ms.cycle_basis(g)) == 3


def test_ladder_has_one_basis_cycle_per_square():
    for length in (1, 2, 5, 9):
        g, _ = ms.truncate(ms.ladder_family(ms.LadderParams(1.0, 0.5)), length)
        assert g.n_edges - g.n_vertices + 1 == length
        assert len(ms.cycle_basis(g)) == length


def test_basis_size_matches_edge_vertex_count_on_random_graphs():
    rng = np.random.default_rng(3)
    for _ in range(15):
        g = random_connected_graph(rng)
        assert len(ms.cycle_basis(g)) == g.n_edges - g.n_vertices + 1


def test_chord_appears_only_in_its_own_basis_cycle():
    rng = np.random.default_rng(5)
    g = random_connected_graph(rng, n=14)
    basis = ms.cycle_basis(g)
    for chord, cyc in basis.cycles.items():
        for other_chord, other in basis.cycles.items():
            uses = sum(1 for u, v in other.pairs if ms.edge_key(u, v) == chord)
            assert uses == (1 if other_chord == chord else 0)


def test_bfs_tree_is_deterministic_with_ascending_neighbours():
    g = cycle_graph(4)
    tree = ms.spanning_tree(g, root=0)
    assert tree.edges == frozenset({(0, 1), (0, 3), (1, 2)})
    assert tree.order == (0, 1, 3, 2)


def test_invalid_tree_is_rejected():
    g = cycle_graph(4)
    bogus = ms.SpanningTree(root=0, parent={1: 0}, order=(0, 1),
                            edges=frozenset({(0, 1)}))
    with pytest.raises(ms.InvalidTree):
        ms.cycle_basis(g, bogus)


# ---------------------------------------------------------------------------
# holonomy
# ---------------------------------------------------------------------------

def test_zero_potential_has_zero_holonomy_everywhere():
    g = cycle_graph(6)
    for cyc in ms.cycle_basis(g).cycles.values():
        assert ms.holonomy(g, cyc) == 0.0


def test_triangle_holonomy_is_the_angle_sum():
    g = ms.build_graph([(0, 1.0), (1, 1.0), (2, 1.0)],
                       [(0, 1, 1.0, 0.1), (1, 2, 1.0, 0.2), (2, 0, 1.0, 0.3)])
    cyc = ms.Cycle.from_vertices([0, 1, 2])
    assert ms.holonomy(g, cyc) == pytest.approx(0.6, abs=1e-15)
    assert ms.holonomy(g, cyc.reversed()) == pytest.approx(-0.6, abs=1e-15)


def test_holonomy_rejects_non_edges_and_broken_chains():
    g = cycle_graph(5)
    with pytest.raises(ms.NotAnEdge):
        ms.holonomy(g, ms.Cycle.from_vertices([0, 1, 3]))
    with pytest.raises(ValueError):
        ms.holonomy(g, ms.Cycle(((0, 1), (2, 3), (3, 0))))


def test_potential_from_holonomy_round_trip_is_exact():
    rng = np.random.default_rng(17)
    for _ in range(20):
        g = random_connected_graph(rng, n=int(rng.integers(5, 25)))
        basis = ms.cycle_basis(g)
        targets = {chord: float(rng.uniform(-8.0, 8.0)) for chord in basis.chords}
        alpha = ms.potential_from_holonomy(g, basis, targets)
        for chord, cyc in basis.cycles.items():
            got = ms.holonomy(g, cyc, alpha)
            assert ms.angle_distance(got, targets[chord]) <= 1e-12
        for key in ms.spanning_tree(g).edges:
            assert alpha[key] == 0.0


def test_potential_from_holonomy_zero_targets_give_zero_potential():
    g = cycle_graph(5)
    basis = ms.cycle_basis(g)
    alpha = ms.potential_from_holonomy(g, basis, {c: 0.0 for c in basis.chords})
    assert all(v == 0.0 for v in alpha.values())


def test_potential_from_holonomy_requires_every_target():
    g = cycle_graph(5)
    basis = ms.cycle_basis(g)
    with pytest.raises(ms.MissingTarget):
        ms.potential_from_holonomy(g, basis, {})


# ---------------------------------------------------------------------------
# gauge transforms
# ---------------------------------------------------------------------------

def test_identity_and_constant_gauges_do_nothing():
    rng = np.random.default_rng(29)
    g = random_connected_graph(rng, n=10)
    alpha = dict(g.alpha)
    for sigma_value in (0.0, 1.2345):
        sigma = {x: sigma_value for x in g.vertex_ids}
        moved = ms.apply_gauge(alpha, sigma)
        for key in alpha:
            assert ms.angle_distance(moved[key], alpha[key]) <= 1e-15


def test_gauge_transform_preserves_holonomy():
    rng = np.random.default_rng(31)
    g = cycle_graph(6, flux=1.234)
    cyc = next(iter(ms.cycle_basis(g).cycles.values()))
    before = ms.holonomy(g, cyc)
    for _ in range(10):
        sigma = random_gauge(rng, g)
        after = ms.holonomy(g, cyc, ms.apply_gauge(dict(g.alpha), sigma))
        assert ms.angle_distance(before, after) <= 1e-12


def test_gauge_reduce_of_pure_gauge_potential_is_zero():
    rng = np.random.default_rng(37)
    for _ in range(15):
        g = random_connected_graph(rng, n=int(rng.integers(4, 40)))
        sigma = random_gauge(rng, g)
        alpha = ms.apply_gauge(ms.zero_potential(g), sigma)
        _, reduced = ms.gauge_reduce(g, alpha)
        assert max(abs(v) for v in reduced.values()) <= 1e-12


def test_gauge_reduce_concentrates_spread_flux_on_the_chord():
    # flux pi spread as pi/4 per edge around a 4-cycle
    g = ms.build_graph([(i, 1.0) for i in range(4)],
                       [(0, 1, 1.0, math.pi / 4), (1, 2, 1.0, math.pi / 4),
                        (2, 3, 1.0, math.pi / 4), (3, 0, 1.0, math.pi / 4)])
    cyc = ms.Cycle.from_vertices([0, 1, 2, 3])
    total = ms.holonomy(g, cyc)
    sigma, reduced = ms.gauge_reduce(g)
    assert ms.angle_distance(total, math.pi) <= 1e-15
    for key in ms.spanning_tree(g).edges:
        assert abs(reduced[key]) <= 1e-15
    assert ms.angle_distance(reduced[(2, 3)], math.pi) <= 1e-15
    after = ms.holonomy(g, cyc, reduced)
    assert ms.angle_distance(after, total) <= 1e-13


def test_gauge_reduce_matches_chord_holonomies():
    rng = np.random.default_rng(41)
    g = random_connected_graph(rng, n=18)
    basis = ms.cycle_basis(g)
    _, reduced = ms.gauge_reduce(g)
    for chord, cyc in basis.cycles.items():
        assert ms.angle_distance(reduced[chord], ms.holonomy(g, cyc)) <= 1e-12


def test_gauge_reduce_is_idempotent():
    rng = np.random.default_rng(43)
    g = random_connected_graph(rng, n=15)
    _, reduced_once = ms.gauge_reduce(g)
    _, reduced_twice = ms.gauge_reduce(g, reduced_once)
    for key in reduced_once:
        assert ms.angle_distance(reduced_once[key], reduced_twice[key]) <= 1e-12


def test_same_holonomy_detects_gauge_equivalence():
    rng = np.random.default_rng(47)
    g = random_connected_graph(rng, n=12)
    alpha = random_potential(rng, g)
    moved = ms.apply_gauge(alpha, random_gauge(rng, g))
    assert ms.same_holonomy(g, alpha, moved)

    g4 = cycle_graph(4)
    basis = ms.cycle_basis(g4)
    flat = ms.potential_from_holonomy(g4, basis, {basis.chords[0]: 0.0})
    twisted = ms.potential_from_holonomy(g4, basis, {basis.chords[0]: math.pi})
    assert not ms.same_holonomy(g4, flat, twisted)

    wrapped = ms.potential_from_holonomy(g4, basis, {basis.chords[0]: 1.0 + TAU})
    plain = ms.potential_from_holonomy(g4, basis, {basis.chords[0]: 1.0})
    assert ms.same_holonomy(g4, wrapped, plain)


def test_cycle_decomposition_reproduces_holonomy_under_random_potentials():
    # ladder squares decompose over the fundamental basis; the identity
    # gamma = sum n_e * gamma_e is verified through holonomy agreement for a
    # batch of random potentials
    g, _ = ms.truncate(ms.ladder_family(ms.LadderParams(1.0, 0.5)), 6)
    basis = ms.cycle_basis(g)
    squares = ms.ladder_squares(g)
    rng = np.random.default_rng(0xC0FFEE)
    for square in squares:
        coeffs = ms.cycle_chord_coefficients(basis, square)
        assert coeffs  # every square meets at least one chord
        for _ in range(32):
            alpha = random_potential(rng, g)
            direct = ms.holonomy(g, square, alpha)
            combined = sum(n * ms.holonomy(g, basis.cycles[chord], alpha)
                           for chord, n in coeffs.items())
            assert ms.angle_distance(direct, combined) <= 1e-12
