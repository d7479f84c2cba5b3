"""Cycle bases, holonomy and gauge reduction of magnetic potentials.

The cycle space of a connected graph is freely generated by the fundamental
cycles of a spanning tree: one cycle per non-tree edge (chord), consisting of
the chord followed by the tree path back.  The holonomy of a potential along
a cycle is the signed sum of edge angles modulo 2*pi; it is invariant under
gauge transforms alpha_xy -> alpha_xy + sigma_y - sigma_x, and two potentials
with equal holonomy on a basis are gauge images of each other.

Gauge reduction constructs such a gauge explicitly: after the transform the
potential vanishes on all tree edges and each chord carries exactly the
holonomy of its fundamental cycle.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Mapping

from .angles import angles_close, normalize_angle
from .errors import InvalidTree, MissingTarget, NotAnEdge, UnknownVertex
from .graph import EdgeKey, Potential, WeightedGraph, edge_key


@dataclass(frozen=True)
class SpanningTree:
    """BFS spanning tree: root, parent pointers and the undirected edge set."""

    root: int
    parent: Mapping[int, int]
    order: tuple[int, ...]
    edges: frozenset[EdgeKey]

    def path(self, start: int, end: int) -> tuple[int, ...]:
        """Vertices of the unique tree path from start to end."""
        up_start = [start]
        x = start
        while x != self.root:
            x = self.parent[x]
            up_start.append(x)
        rank = {v: i for i, v in enumerate(up_start)}
        up_end = [end]
        y = end
        while y not in rank:
            y = self.parent[y]
            up_end.append(y)
        return tuple(up_start[: rank[y]]) + tuple(reversed(up_end))


@dataclass(frozen=True)
class Cycle:
    """A closed chain of oriented edges, each given as a (tail, head) pair."""

    pairs: tuple[tuple[int, int], ...]

    @classmethod
    def from_vertices(cls, vertices: list[int] | tuple[int, ...]) -> "Cycle":
        """Cycle visiting the given vertices in order and closing back."""
        vs = list(vertices)
        if len(vs) < 3:
            raise ValueError(f"a cycle needs at least 3 vertices, got {vs}")
        return cls(tuple((vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))))

    def reversed(self) -> "Cycle":
        return Cycle(tuple((v, u) for u, v in reversed(self.pairs)))

    def validate(self, graph: WeightedGraph) -> None:
        """Check chaining, closure and that every pair is a graph edge."""
        if not self.pairs:
            raise ValueError("empty cycle")
        for (u, v), (u2, _) in zip(self.pairs, self.pairs[1:]):
            if v != u2:
                raise ValueError(f"cycle breaks between edges {(u, v)} and head {u2}")
        if self.pairs[-1][1] != self.pairs[0][0]:
            raise ValueError("cycle is not closed")
        for u, v in self.pairs:
            if not graph.has_edge(u, v):
                raise NotAnEdge(f"cycle uses {{{u}, {v}}} which is not a graph edge")


@dataclass(frozen=True)
class CycleBasis:
    """Spanning tree plus one fundamental cycle per chord.

    Cycles are keyed by the canonical (low, high) chord key and oriented so
    that the chord is traversed low -> high as the first edge.
    """

    tree: SpanningTree
    cycles: Mapping[EdgeKey, Cycle]

    def __len__(self) -> int:
        return len(self.cycles)

    @property
    def chords(self) -> tuple[EdgeKey, ...]:
        return tuple(self.cycles)


def spanning_tree(graph: WeightedGraph, root: int | None = None) -> SpanningTree:
    """Deterministic BFS spanning tree; neighbours are visited in id order."""
    if root is None:
        root = min(graph.vertex_ids)
    if not graph.has_vertex(root):
        raise UnknownVertex(f"root {root} is not in the graph")
    parent: dict[int, int] = {}
    order = [root]
    seen = {root}
    queue = deque([root])
    while queue:
        x = queue.popleft()
        for y in graph.neighbors(x):
            if y not in seen:
                seen.add(y)
                parent[y] = x
                order.append(y)
                queue.append(y)
    edges = frozenset(edge_key(child, par) for child, par in parent.items())
    return SpanningTree(root, parent, tuple(order), edges)


def cycle_basis(graph: WeightedGraph, tree: SpanningTree | None = None) -> CycleBasis:
    """Fundamental cycle basis of the graph for the given spanning tree.

    There are exactly #E - #V + 1 cycles, and each chord appears in its own
    cycle only.
    """
    if tree is None:
        tree = spanning_tree(graph)
    if not tree.edges <= set(graph.edge_keys):
        stray = sorted(tree.edges - set(graph.edge_keys))
        raise InvalidTree(f"tree edges {stray[:4]} are not edges of the graph")
    if len(tree.edges) != graph.n_vertices - 1 or set(tree.order) != set(graph.vertex_ids):
        raise InvalidTree(
            f"edge set does not span the graph ({len(tree.edges)} tree edges, "
            f"{graph.n_vertices} vertices)")
    cycles: dict[EdgeKey, Cycle] = {}
    for key in graph.edge_keys:
        if key in tree.edges:
            continue
        a, b = key
        path = tree.path(b, a)
        pairs = ((a, b),) + tuple(zip(path, path[1:]))
        cycles[key] = Cycle(pairs)
    return CycleBasis(tree, cycles)


def holonomy(graph: WeightedGraph, cycle: Cycle,
             alpha: Potential | None = None) -> float:
    """Signed angle sum along the oriented cycle, reduced to (-pi, pi].

    Reversing the cycle negates the result modulo 2*pi.
    """
    cycle.validate(graph)
    g = graph if alpha is None else graph.with_alpha(alpha)
    total = 0.0
    for u, v in cycle.pairs:
        total += g.edge_alpha(u, v)
    return normalize_angle(total)


def zero_potential(graph: WeightedGraph) -> dict[EdgeKey, float]:
    """The trivial potential: angle zero on every edge."""
    return dict.fromkeys(graph.edge_keys, 0.0)


def potential_from_holonomy(graph: WeightedGraph, basis: CycleBasis,
                            targets: Mapping[EdgeKey, float]) -> dict[EdgeKey, float]:
    """Potential vanishing on the tree and realizing prescribed basis holonomies.

    `targets` assigns one angle per chord (canonical key).  The returned
    potential carries the target angle on the chord itself and zero on every
    tree edge, so the holonomy of each fundamental cycle equals its target
    exactly (modulo 2*pi).
    """
    alpha = dict.fromkeys(graph.edge_keys, 0.0)
    missing = [k for k in basis.cycles if k not in targets]
    if missing:
        raise MissingTarget(f"no target holonomy for basis cycles {missing[:4]}")
    extra = [k for k in targets if k not in basis.cycles]
    if extra:
        raise MissingTarget(f"targets given for non-chord edges {extra[:4]}")
    for key in basis.cycles:
        alpha[key] = normalize_angle(targets[key])
    return alpha


def apply_gauge(alpha: Potential, sigma: Mapping[int, float]) -> dict[EdgeKey, float]:
    """Gauge transform of a potential: alpha'_uv = alpha_uv + sigma_v - sigma_u.

    Holonomy along every cycle is unchanged.
    """
    out: dict[EdgeKey, float] = {}
    for (u, v), a in alpha.items():
        try:
            out[(u, v)] = normalize_angle(a + sigma[v] - sigma[u])
        except KeyError as exc:
            raise UnknownVertex(f"gauge function misses vertex {exc.args[0]}") from None
    return out


def gauge_reduce(graph: WeightedGraph, alpha: Potential | None = None,
                 ) -> tuple[dict[int, float], dict[EdgeKey, float]]:
    """Gauge away every tree-edge angle of a potential.

    Returns (sigma, alpha') with alpha' = apply_gauge(alpha, sigma): alpha'
    vanishes on the BFS tree edges and each chord carries the holonomy of its
    fundamental cycle.  If every basis holonomy vanishes modulo 2*pi the
    reduced potential is zero throughout (up to roundoff).
    """
    if alpha is None:
        alpha = dict(graph.alpha)
    else:
        alpha = {k: normalize_angle(v) for k, v in graph.with_alpha(alpha).alpha.items()}
    tree = spanning_tree(graph)
    sigma = {tree.root: 0.0}
    for child in tree.order[1:]:
        par = tree.parent[child]
        key = edge_key(par, child)
        signed = alpha[key] if par < child else -alpha[key]
        sigma[child] = sigma[par] - signed
    sigma = {x: normalize_angle(s) for x, s in sigma.items()}
    return sigma, apply_gauge(alpha, sigma)


def same_holonomy(graph: WeightedGraph, alpha1: Potential, alpha2: Potential,
                  tol: float = 1e-12) -> bool:
    """True when the two potentials agree on every basis cycle modulo 2*pi.

    Equivalently, true when the potentials are gauge images of each other.
    """
    basis = cycle_basis(graph)
    for cyc in basis.cycles.values():
        h1 = holonomy(graph, cyc, alpha1)
        h2 = holonomy(graph, cyc, alpha2)
        if not angles_close(h1, h2, tol):
            return False
    return True


def cycle_chord_coefficients(basis: CycleBasis, cycle: Cycle) -> dict[EdgeKey, int]:
    """Decomposition of a cycle over the fundamental basis.

    A cycle equals the integer combination of fundamental cycles given by the
    signed multiplicities of the chords it traverses; the coefficient of the
    basis cycle of chord (a, b) counts traversals a -> b minus b -> a.
    """
    coeffs: dict[EdgeKey, int] = {}
    for u, v in cycle.pairs:
        key = edge_key(u, v)
        if key in basis.cycles:
            coeffs[key] = coeffs.get(key, 0) + (1 if (u, v) == key else -1)
    return {k: n for k, n in coeffs.items() if n != 0}
