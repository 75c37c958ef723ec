"""Metric graphs: length, effective resistance, the tau invariant, and
cycle-space Gram matrices.

Resistances are computed exactly: edges are subdivided at the query
points, the weighted graph Laplacian (conductance 1/length) is grounded
at one node and solved over Q.  The tau invariant integrates (f')^2 over
the graph for f = r(., q)/2; on every edge r restricted to the edge is a
quadratic polynomial of the arclength, so three exact samples (endpoints
and midpoint) determine it and the integral has a closed form.  The
result does not depend on the base point q.

The cycle space of the graph carries the Gram matrix

    gram[i][j] = sum over edges e of length(e) * c_i(e) * c_j(e)

over an integral cycle basis built from a deterministic DFS spanning
tree.  Its normalized second moment is basis-independent and satisfies
the identity I = length/8 - tau/2, which couples this module against the
lattice/polytope pipeline through two unrelated computations; the
residual of that identity is exposed here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import _linalg
from .lattice import GramLattice
from .polytope import second_moment

__all__ = [
    "Edge",
    "MetricGraph",
    "GraphPoint",
    "DisconnectedGraphError",
    "RankZeroError",
    "total_length",
    "effective_resistance",
    "tau",
    "cycle_basis",
    "jacobian_gram",
    "graph_second_moment",
    "moment_identity_residual",
]


class DisconnectedGraphError(ValueError):
    pass


class RankZeroError(ValueError):
    """The graph is a tree; its cycle space is trivial."""


@dataclass(frozen=True)
class Edge:
    tail: int
    head: int
    length: Fraction

    def __post_init__(self):
        if self.length <= 0:
            raise ValueError("edge lengths must be positive")


@dataclass(frozen=True)
class GraphPoint:
    """A point on an edge, at arclength ``offset`` from the tail."""

    edge: int
    offset: Fraction


@dataclass(frozen=True)
class MetricGraph:
    vertex_count: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if self.vertex_count < 1:
            raise ValueError("graph needs at least one vertex")
        for e in self.edges:
            if not (0 <= e.tail < self.vertex_count
                    and 0 <= e.head < self.vertex_count):
                raise ValueError(f"edge endpoint out of range: {e}")
        # connectivity over the underlying graph (loops are irrelevant)
        seen = {0}
        frontier = [0]
        adj: dict[int, list[int]] = {}
        for e in self.edges:
            adj.setdefault(e.tail, []).append(e.head)
            adj.setdefault(e.head, []).append(e.tail)
        while frontier:
            v = frontier.pop()
            for w in adj.get(v, ()):
                if w not in seen:
                    seen.add(w)
                    frontier.append(w)
        if len(seen) != self.vertex_count:
            raise DisconnectedGraphError("graph is not connected")


def make_graph(vertex_count: int, edges) -> MetricGraph:
    """Convenience constructor from (tail, head, length) triples."""
    return MetricGraph(
        vertex_count=vertex_count,
        edges=tuple(Edge(t, h, Fraction(l)) for t, h, l in edges),
    )


def total_length(graph: MetricGraph) -> Fraction:
    return sum((e.length for e in graph.edges), Fraction(0))


def _resolve(graph: MetricGraph, point):
    """Normalize a point argument to ('vertex', id) or ('interior', edge, offset)."""
    if isinstance(point, int):
        if not 0 <= point < graph.vertex_count:
            raise ValueError(f"vertex id {point} out of range")
        return ("vertex", point)
    e = graph.edges[point.edge]
    off = Fraction(point.offset)
    if not 0 <= off <= e.length:
        raise ValueError("offset is outside the edge")
    if off == 0:
        return ("vertex", e.tail)
    if off == e.length:
        return ("vertex", e.head)
    return ("interior", point.edge, off)


def _subdivided(graph: MetricGraph, interior_points):
    """Subdivide edges at the given interior points.

    Returns (edge triples, node count, node id of each point).  Points on
    the same edge are handled by chained subdivision; coincident points
    share a node.
    """
    cuts: dict[int, list[Fraction]] = {}
    for _, e, off in interior_points:
        cuts.setdefault(e, [])
        if off not in cuts[e]:
            cuts[e].append(off)
    for offs in cuts.values():
        offs.sort()
    nodes = graph.vertex_count
    edges: list[tuple[int, int, Fraction]] = []
    node_of: dict[tuple[int, Fraction], int] = {}
    for idx, e in enumerate(graph.edges):
        if idx not in cuts:
            edges.append((e.tail, e.head, e.length))
            continue
        prev_node = e.tail
        prev_off = Fraction(0)
        for off in cuts[idx]:
            node_of[(idx, off)] = nodes
            edges.append((prev_node, nodes, off - prev_off))
            prev_node, prev_off = nodes, off
            nodes += 1
        edges.append((prev_node, e.head, e.length - prev_off))
    ids = []
    for kind, e, off in interior_points:
        ids.append(node_of[(e, off)])
    return edges, nodes, ids


def _node_resistance(edges, node_count: int, a: int, b: int) -> Fraction:
    """Resistance between two nodes: grounded Laplacian, exact solve."""
    if a == b:
        return Fraction(0)
    size = node_count - 1

    def slot(v: int) -> int:
        # ground node b: delete its row and column
        return v if v < b else v - 1

    lap = [[Fraction(0)] * size for _ in range(size)]
    for t, h, length in edges:
        if t == h:
            continue
        c = Fraction(1) / length
        if t != b:
            lap[slot(t)][slot(t)] += c
        if h != b:
            lap[slot(h)][slot(h)] += c
        if t != b and h != b:
            lap[slot(t)][slot(h)] -= c
            lap[slot(h)][slot(t)] -= c
    rhs = [Fraction(0)] * size
    rhs[slot(a)] = Fraction(1)
    sol = _linalg.solve(lap, rhs)
    if sol is None:
        raise DisconnectedGraphError("singular Laplacian: graph not connected")
    return sol[slot(a)]


def effective_resistance(graph: MetricGraph, p, q) -> Fraction:
    """Effective resistance between two points (vertex ids or GraphPoints)."""
    rp, rq = _resolve(graph, p), _resolve(graph, q)
    interior = [x for x in (rp, rq) if x[0] == "interior"]
    if rp == rq:
        return Fraction(0)
    edges, node_count, ids = _subdivided(graph, interior)
    it = iter(ids)
    a = rp[1] if rp[0] == "vertex" else next(it)
    b = rq[1] if rq[0] == "vertex" else next(it)
    if a == b:
        return Fraction(0)
    return _node_resistance(edges, node_count, a, b)


def _edge_tau_term(edges, node_count, base, t, h, length) -> Fraction:
    """Integral of (r'(x, base)/2)^2 along one edge of the network.

    r restricted to the edge is quadratic in the arclength parameter;
    fit through the exact values at offsets 0, L/2, L.
    """
    r0 = _node_resistance(edges, node_count, t, base)
    r_l = _node_resistance(edges, node_count, h, base)
    # temporary midpoint node; drop exactly one copy of the edge
    # (parallel copies must stay)
    removed = False
    mid_edges = []
    for e in edges:
        if not removed and e == (t, h, length):
            removed = True
            continue
        mid_edges.append(e)
    half = length / 2
    mid = node_count
    mid_edges.append((t, mid, half))
    mid_edges.append((mid, h, half))
    r_m = _node_resistance(mid_edges, node_count + 1, mid, base)

    diff_l = r_l - r0
    diff_m = r_m - r0
    qa = 2 * (diff_l - 2 * diff_m) / (length * length)
    qb = (4 * diff_m - diff_l) / length
    # integral of ((2*qa*t + qb)/2)^2 over [0, L]
    return (4 * qa * qa * length**3 / 3
            + 2 * qa * qb * length**2
            + qb * qb * length) / 4


def tau(graph: MetricGraph, q=0) -> Fraction:
    """The tau invariant: integral of (f')^2 with f = r(., q)/2.

    Independent of the base point q (vertex id or GraphPoint); q defaults
    to vertex 0.  A base point interior to an edge is made a node by a
    permanent subdivision before the per-edge integrals are accumulated.
    """
    rq = _resolve(graph, q)
    interior = [rq] if rq[0] == "interior" else []
    edges, node_count, ids = _subdivided(graph, interior)
    base = rq[1] if rq[0] == "vertex" else ids[0]
    total = Fraction(0)
    for t, h, length in edges:
        total += _edge_tau_term(edges, node_count, base, t, h, length)
    return total


def cycle_basis(graph: MetricGraph) -> list[list[int]]:
    """Integral cycle basis from the DFS spanning tree (lowest edge index
    wins ties); one coefficient vector per independent cycle."""
    n = graph.vertex_count
    incident: dict[int, list[tuple[int, int]]] = {v: [] for v in range(n)}
    for idx, e in enumerate(graph.edges):
        incident[e.tail].append((idx, e.head))
        if e.head != e.tail:
            incident[e.head].append((idx, e.tail))
    for v in incident:
        incident[v].sort()

    parent: dict[int, tuple[int, int, int]] = {}  # v -> (edge, sign, parent vertex)
    visited = {0}
    tree_edges: set[int] = set()
    stack = [0]
    while stack:
        v = stack.pop()
        # reversed push so the lowest edge index is explored first
        for idx, w in reversed(incident[v]):
            if w not in visited:
                visited.add(w)
                e = graph.edges[idx]
                sign = 1 if (e.tail == v and e.head == w) else -1
                parent[w] = (idx, sign, v)
                tree_edges.add(idx)
                stack.append(w)

    def chain(v: int) -> dict[int, int]:
        """Signed tree path from the root to v."""
        coeffs: dict[int, int] = {}
        while v != 0:
            idx, sign, up = parent[v]
            coeffs[idx] = coeffs.get(idx, 0) + sign
            v = up
        return coeffs

    basis: list[list[int]] = []
    for idx, e in enumerate(graph.edges):
        if idx in tree_edges:
            continue
        coeffs = {idx: 1}
        if e.tail != e.head:
            # close up: travel tail -> head along e, head -> tail in the tree
            for j, c in chain(e.head).items():
                coeffs[j] = coeffs.get(j, 0) - c
            for j, c in chain(e.tail).items():
                coeffs[j] = coeffs.get(j, 0) + c
        vec = [coeffs.get(j, 0) for j in range(len(graph.edges))]
        basis.append(vec)
    return basis


def jacobian_gram(graph: MetricGraph) -> GramLattice:
    """Gram matrix of the cycle lattice with edge-length weights."""
    basis = cycle_basis(graph)
    b = len(basis)
    if b == 0:
        raise RankZeroError("graph is a tree; the cycle lattice is trivial")
    lengths = [e.length for e in graph.edges]
    gram = tuple(
        tuple(
            sum(
                (lengths[k] * basis[i][k] * basis[j][k] for k in range(len(lengths))),
                Fraction(0),
            )
            for j in range(b)
        )
        for i in range(b)
    )
    return GramLattice(rank=b, gram=gram)


def graph_second_moment(graph: MetricGraph) -> Fraction:
    """Normalized second moment of the cycle lattice; 0 for trees."""
    try:
        lat = jacobian_gram(graph)
    except RankZeroError:
        return Fraction(0)
    return second_moment(lat)


def moment_identity_residual(graph: MetricGraph) -> Fraction:
    """graph_second_moment - (length/8 - tau/2); identically zero."""
    ell = total_length(graph)
    return graph_second_moment(graph) - (ell / 8 - tau(graph) / 2)
