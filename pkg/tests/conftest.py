"""Shared builders for the test suite: deterministic random graphs and potentials."""

from __future__ import annotations

import math

import numpy as np

import magspec as ms


def cycle_graph(n: int, flux: float | None = None) -> ms.WeightedGraph:
    """Unit-weight cycle on vertices 0..n-1, optionally carrying a total flux."""
    vertices = [(i, 1.0) for i in range(n)]
    edges = [(i, (i + 1) % n, 1.0) for i in range(n)]
    graph = ms.build_graph(vertices, edges)
    if flux is not None:
        basis = ms.cycle_basis(graph)
        graph = graph.with_alpha(
            ms.potential_from_holonomy(graph, basis, {basis.chords[0]: flux}))
    return graph


def path_graph(n: int) -> ms.WeightedGraph:
    return ms.build_graph([(i, 1.0) for i in range(n)],
                          [(i, i + 1, 1.0) for i in range(n - 1)])


def random_connected_graph(rng: np.random.Generator, n: int | None = None,
                           max_degree: int | None = None,
                           c_range: tuple[float, float] = (0.1, 10.0),
                           omega_range: tuple[float, float] = (0.1, 10.0),
                           extra_edges: float = 0.6,
                           random_alpha: bool = True) -> ms.WeightedGraph:
    """Random connected graph: a random tree plus chords, weights in the ranges."""
    if n is None:
        n = int(rng.integers(4, 41))
    pairs: list[tuple[int, int]] = []
    degree = [0] * n
    for v in range(1, n):
        candidates = [u for u in range(v)
                      if max_degree is None or degree[u] < max_degree]
        u = int(candidates[rng.integers(len(candidates))])
        pairs.append((u, v))
        degree[u] += 1
        degree[v] += 1
    existing = set(pairs)
    wanted = int(round(extra_edges * n))
    attempts = 0
    while wanted > 0 and attempts < 50 * n:
        attempts += 1
        u = int(rng.integers(n))
        v = int(rng.integers(n))
        if u == v:
            continue
        u, v = min(u, v), max(u, v)
        if (u, v) in existing:
            continue
        if max_degree is not None and (degree[u] >= max_degree or degree[v] >= max_degree):
            continue
        existing.add((u, v))
        pairs.append((u, v))
        degree[u] += 1
        degree[v] += 1
        wanted -= 1

    vertices = [(i, float(rng.uniform(*omega_range))) for i in range(n)]
    edges = []
    for u, v in pairs:
        alpha = float(rng.uniform(-math.pi, math.pi)) if random_alpha else 0.0
        edges.append((u, v, float(rng.uniform(*c_range)), alpha))
    return ms.build_graph(vertices, edges)


def random_potential(rng: np.random.Generator, graph: ms.WeightedGraph) -> dict:
    return {key: float(rng.uniform(-math.pi, math.pi)) for key in graph.edge_keys}


def random_gauge(rng: np.random.Generator, graph: ms.WeightedGraph) -> dict:
    return {x: float(rng.uniform(-math.pi, math.pi)) for x in graph.vertex_ids}


def vector_for(graph: ms.WeightedGraph, mapping: dict[int, complex]) -> np.ndarray:
    """Dense vector in vertex order from a sparse id -> value mapping."""
    out = np.zeros(graph.n_vertices, dtype=complex)
    for x, val in mapping.items():
        out[graph.index(x)] = val
    return out
