"""Lazily generated graph families and their finite truncations.

An infinite graph is represented only through a generator that, for each
radius R >= 1, produces the finite truncation G_R together with its frontier:
the vertices of G_R that have neighbours outside G_R in the full graph.
Vertex ids must be stable across radii, and G_R must be an induced subgraph
of G_R' for R < R'.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable

from .errors import GeneratorFailure, UnknownVertex
from .graph import WeightedGraph

Truncation = tuple[WeightedGraph, frozenset[int]]


@dataclass(frozen=True)
class GraphFamily:
    """A radius-indexed family of nested finite graphs.

    Attributes:
        generator: maps a radius R >= 1 to (G_R, frontier_R).
        base_vertex: a vertex id present at every radius.
        name: label used in reports.
    """

    generator: Callable[[int], Truncation]
    base_vertex: int
    name: str = "family"


def truncate(family: GraphFamily, radius: int) -> Truncation:
    """Deterministic truncation of the family at the given radius.

    Returns (G_R, frontier).  An empty frontier signals that the truncation
    already exhausts the full graph.
    """
    if radius < 1:
        raise ValueError(f"truncation radius must be >= 1, got {radius}")
    try:
        graph, frontier = family.generator(radius)
    except Exception as exc:
        raise GeneratorFailure(
            f"generator of family {family.name!r} failed at radius {radius}: {exc}"
        ) from exc
    frontier = frozenset(frontier)
    stray = [x for x in frontier if not graph.has_vertex(x)]
    if stray:
        raise GeneratorFailure(
            f"family {family.name!r}: frontier vertices {sorted(stray)[:4]} "
            f"are not in the radius-{radius} truncation")
    if not graph.has_vertex(family.base_vertex):
        raise GeneratorFailure(
            f"family {family.name!r}: base vertex {family.base_vertex} missing "
            f"at radius {radius}")
    return graph, frontier


def finite_family(graph: WeightedGraph, base_vertex: int | None = None,
                  name: str = "finite") -> GraphFamily:
    """Wrap a finite graph as a family of combinatorial balls around a base.

    The truncation at radius R is the induced subgraph on the hop-ball of
    radius R around the base vertex; once R reaches the base's eccentricity
    the whole graph is returned with an empty frontier.
    """
    base = min(graph.vertex_ids) if base_vertex is None else base_vertex
    if not graph.has_vertex(base):
        raise UnknownVertex(f"base vertex {base} is not in the graph")

    hops = _hop_distances(graph, base)

    def generate(radius: int) -> Truncation:
        inside = frozenset(x for x in graph.vertex_ids if hops[x] <= radius)
        if len(inside) == graph.n_vertices:
            return graph, frozenset()
        keep = sorted(inside)
        sub_edges = [(u, v, c, a) for u, v, c, a in graph.edges()
                     if u in inside and v in inside]
        from .graph import build_graph  # local import to avoid cycle at module load

        sub = build_graph([(x, graph.omega[x]) for x in keep], sub_edges)
        frontier = frozenset(
            x for x in inside
            if any(y not in inside for y in graph.neighbors(x)))
        return sub, frontier

    return GraphFamily(generate, base, name=name)


def _hop_distances(graph: WeightedGraph, source: int) -> dict[int, int]:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        x = queue.popleft()
        for y in graph.neighbors(x):
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist
