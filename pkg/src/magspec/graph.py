"""Weighted graphs carrying a magnetic potential.

A graph couples strictly positive vertex weights, strictly positive edge
weights and one angle per undirected edge.  The angle is stored for the
canonical orientation low-id -> high-id; reading the edge the other way
negates it, so the stored data is automatically antisymmetric.

The JSON form is::

    {"vertices": [{"id": 0, "omega": 1.0}, ...],
     "edges": [{"u": 0, "v": 1, "c": 1.0, "alpha": 0.0}, ...]}

with `alpha` oriented u -> v.  Canonical serialization sorts vertices by id
and edges by (min(u, v), max(u, v)), with u < v.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping

from .angles import normalize_angle
from .errors import (
    Disconnected,
    DuplicateEdge,
    GraphFormatError,
    NonPositiveWeight,
    NotAnEdge,
    SelfLoop,
    UnknownVertex,
)

EdgeKey = tuple[int, int]

#: A magnetic potential: one angle per canonical edge key (low, high).
Potential = Mapping[EdgeKey, float]


def edge_key(u: int, v: int) -> EdgeKey:
    """Canonical (low, high) key of the undirected edge {u, v}."""
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class WeightedGraph:
    """Immutable finite connected weighted graph with a magnetic potential.

    All operations in the toolkit are read-only on this structure, so
    instances can be shared freely between threads.
    """

    vertex_ids: tuple[int, ...]
    omega: Mapping[int, float]
    c: Mapping[EdgeKey, float]
    alpha: Mapping[EdgeKey, float]
    adjacency: Mapping[int, tuple[int, ...]]

    @property
    def n_vertices(self) -> int:
        return len(self.vertex_ids)

    @property
    def n_edges(self) -> int:
        return len(self.c)

    @cached_property
    def edge_keys(self) -> tuple[EdgeKey, ...]:
        return tuple(sorted(self.c))

    @cached_property
    def _pos(self) -> dict[int, int]:
        return {x: i for i, x in enumerate(self.vertex_ids)}

    def index(self, x: int) -> int:
        """Row index of vertex x in vector and matrix representations."""
        try:
            return self._pos[x]
        except KeyError:
            raise UnknownVertex(f"vertex {x} is not in the graph") from None

    def has_vertex(self, x: int) -> bool:
        return x in self._pos

    def has_edge(self, u: int, v: int) -> bool:
        return edge_key(u, v) in self.c

    def neighbors(self, x: int) -> tuple[int, ...]:
        try:
            return self.adjacency[x]
        except KeyError:
            raise UnknownVertex(f"vertex {x} is not in the graph") from None

    def degree(self, x: int) -> int:
        return len(self.neighbors(x))

    def vertex_omega(self, x: int) -> float:
        try:
            return self.omega[x]
        except KeyError:
            raise UnknownVertex(f"vertex {x} is not in the graph") from None

    def edge_c(self, u: int, v: int) -> float:
        try:
            return self.c[edge_key(u, v)]
        except KeyError:
            raise NotAnEdge(f"{{{u}, {v}}} is not an edge of the graph") from None

    def edge_alpha(self, u: int, v: int) -> float:
        """Angle of the oriented edge u -> v; the reverse orientation negates it."""
        try:
            a = self.alpha[edge_key(u, v)]
        except KeyError:
            raise NotAnEdge(f"{{{u}, {v}}} is not an edge of the graph") from None
        return normalize_angle(a if u < v else -a)

    def edges(self) -> Iterator[tuple[int, int, float, float]]:
        """Canonical edges as (u, v, c, alpha) with u < v, sorted by key."""
        for key in self.edge_keys:
            yield key[0], key[1], self.c[key], self.alpha[key]

    def with_alpha(self, alpha: Potential) -> "WeightedGraph":
        """Copy of the graph with the magnetic potential replaced.

        `alpha` must assign an angle to every canonical edge key.
        """
        missing = [k for k in self.c if k not in alpha]
        if missing:
            raise NotAnEdge(f"potential misses edges {sorted(missing)[:4]}")
        extra = [k for k in alpha if k not in self.c]
        if extra:
            raise NotAnEdge(f"potential has angles for non-edges {sorted(extra)[:4]}")
        new_alpha = {k: normalize_angle(alpha[k]) for k in self.c}
        return WeightedGraph(self.vertex_ids, self.omega, self.c,
                             new_alpha, self.adjacency)

    def unit_weights(self, alpha: Potential | None = None) -> "WeightedGraph":
        """Same combinatorics with omega = 1 everywhere and c = 1 on every edge."""
        g = WeightedGraph(
            self.vertex_ids,
            {x: 1.0 for x in self.vertex_ids},
            {k: 1.0 for k in self.c},
            self.alpha,
            self.adjacency,
        )
        return g if alpha is None else g.with_alpha(alpha)


def build_graph(vertices: Iterable[tuple[int, float]] | Mapping[int, float],
                edges: Iterable[tuple]) -> WeightedGraph:
    """Validate raw vertex/edge data and assemble a WeightedGraph.

    Args:
        vertices: (id, omega) pairs or an id -> omega mapping.
        edges: (u, v, c) or (u, v, c, alpha) tuples; alpha defaults to 0 and
            is interpreted for the orientation u -> v.

    Raises:
        NonPositiveWeight, SelfLoop, DuplicateEdge, UnknownVertex,
        Disconnected: naming the offending vertex or edge.
    """
    if isinstance(vertices, Mapping):
        vertex_items = list(vertices.items())
    else:
        vertex_items = [(int(x), float(w)) for x, w in vertices]
    omega: dict[int, float] = {}
    for x, w in vertex_items:
        if x in omega:
            raise DuplicateEdge(f"vertex {x} listed twice")
        if not w > 0.0:
            raise NonPositiveWeight(f"vertex {x} has omega={w}; vertex weights must be > 0")
        omega[x] = float(w)
    if not omega:
        raise Disconnected("graph has no vertices")

    c: dict[EdgeKey, float] = {}
    alpha: dict[EdgeKey, float] = {}
    neighbors: dict[int, set[int]] = {x: set() for x in omega}
    for e in edges:
        if len(e) == 3:
            u, v, weight = e
            angle = 0.0
        else:
            u, v, weight, angle = e
        u, v = int(u), int(v)
        if u == v:
            raise SelfLoop(f"edge {u}-{v} is a self-loop")
        if u not in omega or v not in omega:
            missing = u if u not in omega else v
            raise UnknownVertex(f"edge {u}-{v} uses unknown vertex {missing}")
        key = edge_key(u, v)
        if key in c:
            raise DuplicateEdge(f"edge {key[0]}-{key[1]} listed twice")
        if not weight > 0.0:
            raise NonPositiveWeight(f"edge {u}-{v} has c={weight}; edge weights must be > 0")
        c[key] = float(weight)
        alpha[key] = normalize_angle(float(angle) if u < v else -float(angle))
        neighbors[u].add(v)
        neighbors[v].add(u)

    vertex_ids = tuple(sorted(omega))
    adjacency = {x: tuple(sorted(neighbors[x])) for x in vertex_ids}

    # connectivity check by BFS from the smallest id
    seen = {vertex_ids[0]}
    queue = deque(seen)
    while queue:
        x = queue.popleft()
        for y in adjacency[x]:
            if y not in seen:
                seen.add(y)
                queue.append(y)
    if len(seen) != len(vertex_ids):
        stray = sorted(set(vertex_ids) - seen)
        raise Disconnected(f"vertices {stray[:8]} are not reachable from vertex {vertex_ids[0]}")

    return WeightedGraph(vertex_ids, omega, c, alpha, adjacency)


def degree_bound(graph: WeightedGraph) -> int:
    """Maximum vertex degree of the graph."""
    return max(graph.degree(x) for x in graph.vertex_ids)


def graph_to_dict(graph: WeightedGraph) -> dict:
    """Canonical JSON-ready form: vertices sorted by id, edges by key."""
    return {
        "vertices": [{"id": x, "omega": graph.omega[x]} for x in graph.vertex_ids],
        "edges": [{"u": u, "v": v, "c": w, "alpha": a} for u, v, w, a in graph.edges()],
    }


def graph_from_dict(data: dict) -> WeightedGraph:
    try:
        vertices = [(item["id"], item["omega"]) for item in data["vertices"]]
        edges = [(item["u"], item["v"], item["c"], item.get("alpha", 0.0))
                 for item in data["edges"]]
    except (KeyError, TypeError) as exc:
        raise GraphFormatError(f"malformed graph document: {exc}") from exc
    return build_graph(vertices, edges)


def dumps_graph(graph: WeightedGraph) -> str:
    """Canonical serialization; stable bytes for identical graphs."""
    return json.dumps(graph_to_dict(graph), sort_keys=True, separators=(",", ":"))


def loads_graph(text: str) -> WeightedGraph:
    return graph_from_dict(json.loads(text))
