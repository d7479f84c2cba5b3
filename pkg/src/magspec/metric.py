"""The weighted path metric and distances to the truncation frontier.

Each edge {x, y} gets the length min(omega_x, omega_y) / sqrt(c_xy); the
induced shortest-path distance is the metric under which completeness of an
infinite graph is probed.  On a truncation G_R the distance from x to the
frontier is a lower bound for the distance from x to infinity in the full
graph, because every escaping path has to cross the frontier.
"""

from __future__ import annotations

import heapq
import math
from typing import Iterable

from .errors import NotAnEdge, UnknownVertex
from .family import GraphFamily, truncate
from .graph import WeightedGraph, edge_key


def edge_length(graph: WeightedGraph, u: int, v: int) -> float:
    """Length min(omega_u, omega_v) / sqrt(c_uv) of the edge {u, v}."""
    c = graph.edge_c(u, v)
    return min(graph.vertex_omega(u), graph.vertex_omega(v)) / math.sqrt(c)


class PathMetric:
    """Precomputed edge lengths of a graph under the weighted path metric."""

    def __init__(self, graph: WeightedGraph):
        self.graph = graph
        self._length = {
            key: min(graph.omega[key[0]], graph.omega[key[1]]) / math.sqrt(c)
            for key, c in graph.c.items()
        }

    def length(self, u: int, v: int) -> float:
        key = edge_key(u, v)
        try:
            return self._length[key]
        except KeyError:
            raise NotAnEdge(f"{{{u}, {v}}} is not an edge of the graph") from None

    def distance(self, x: int, y: int) -> float:
        return dp_distance(self.graph, x, y)


def shortest_path_lengths(graph: WeightedGraph,
                          sources: Iterable[int]) -> dict[int, float]:
    """Dijkstra distances from a set of sources under the path metric.

    Binary heap with ties broken by smaller vertex id, so the result is
    deterministic.  Covers every vertex (graphs are connected).
    """
    metric = PathMetric(graph)
    dist: dict[int, float] = {}
    heap = [(0.0, s) for s in sorted(set(sources))]
    for _, s in heap:
        if not graph.has_vertex(s):
            raise UnknownVertex(f"vertex {s} is not in the graph")
    heapq.heapify(heap)
    while heap:
        d, x = heapq.heappop(heap)
        if x in dist:
            continue
        dist[x] = d
        for y in graph.neighbors(x):
            if y not in dist:
                heapq.heappush(heap, (d + metric._length[edge_key(x, y)], y))
    return dist


def dp_distance(graph: WeightedGraph, x: int, y: int) -> float:
    """Shortest-path distance between x and y under the path metric."""
    if not graph.has_vertex(y):
        raise UnknownVertex(f"vertex {y} is not in the graph")
    return shortest_path_lengths(graph, [x])[y]


def frontier_distances(graph: WeightedGraph,
                       frontier: frozenset[int] | set[int]) -> dict[int, float]:
    """Distance of every vertex to the frontier; +inf when the frontier is empty."""
    if not frontier:
        return {x: math.inf for x in graph.vertex_ids}
    return shortest_path_lengths(graph, frontier)


def distance_to_frontier(graph: WeightedGraph,
                         frontier: frozenset[int] | set[int], x: int) -> float:
    """Distance from x to the nearest frontier vertex (+inf for empty frontier)."""
    if not graph.has_vertex(x):
        raise UnknownVertex(f"vertex {x} is not in the graph")
    if not frontier:
        return math.inf
    return frontier_distances(graph, frontier)[x]


def completeness_probe(family: GraphFamily,
                       radii: Iterable[int]) -> list[tuple[int, float]]:
    """Frontier-distance lower bounds over a growing sequence of radii.

    For each radius R the probe reports min over x in G_{R/2} of the distance
    from x to the frontier of G_R.  A bounded column signals that escape to
    infinity has finite length (an incomplete metric); growth proportional to
    R is what complete families show.
    """
    radii = list(radii)
    if any(r2 <= r1 for r1, r2 in zip(radii, radii[1:])):
        raise ValueError(f"radii must be strictly increasing, got {radii}")
    rows: list[tuple[int, float]] = []
    for radius in radii:
        graph, frontier = truncate(family, radius)
        core, _ = truncate(family, max(1, radius // 2))
        dist = frontier_distances(graph, frontier)
        rows.append((radius, min(dist[x] for x in core.vertex_ids)))
    return rows
