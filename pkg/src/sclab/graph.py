"""Weighted graph data model, formal Laplacian, and the graph energy form.

A weighted graph is a triple (V, omega, mu): a countable vertex set V,
symmetric positive edge weights omega, and a positive vertex measure mu.
Graphs may be infinite; they are represented by a pure neighbor
enumerator, and every computation happens on a finite window extracted
by a ball search.  Vertex ids are opaque integers.  Neighbor lists must
be finite, sorted by neighbor id, and deterministic, which makes window
extraction and the assembled linear systems reproducible.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

__all__ = [
    "WeightedGraph",
    "GraphWindow",
    "VertexFunction",
    "BallCapError",
    "GraphFormatError",
    "validate",
    "formal_laplacian",
    "energy",
    "truncate_by_jump_size",
    "ball_window",
    "full_window",
    "load_graph",
    "save_graph",
]

DEFAULT_BALL_CAP = 200_000


class BallCapError(RuntimeError):
    """Raised when a ball search exceeds its vertex-count safety cap."""


class GraphFormatError(ValueError):
    """Raised on malformed graph or metric files; carries the line number."""


class WeightedGraph:
    """Weighted graph (V, omega, mu) given by a neighbor enumerator.

    Parameters
    ----------
    source : callable
        Maps a vertex id to a finite sequence of ``(neighbor, omega)``
        pairs, sorted by neighbor id.  Must be deterministic and must
        enumerate each edge from both endpoints with equal weight.
    mu : callable or dict or float
        Vertex measure.  A dict is looked up per vertex, a float is
        used for every vertex.
    vertex_ids : sequence of int, optional
        Full vertex list for finite graphs.  ``None`` means the graph
        is (potentially) infinite and only reachable via ``source``.
    """

    def __init__(self, source, mu=1.0, vertex_ids=None):
        self._source = source
        if callable(mu):
            self._mu = mu
        elif isinstance(mu, dict):
            self._mu = mu.__getitem__
        else:
            self._mu = lambda x, _m=float(mu): _m
        self.vertex_ids = None if vertex_ids is None else tuple(vertex_ids)

    def neighbors(self, x: int) -> Sequence[Tuple[int, float]]:
        """Finite sorted list of ``(neighbor, omega)`` pairs at ``x``."""
        return self._source(x)

    def mu(self, x: int) -> float:
        """Vertex measure mu(x) > 0."""
        return self._mu(x)

    def degree(self, x: int) -> float:
        """Weighted degree Deg(x) = (1/mu(x)) * sum_y omega(x, y)."""
        return sum(w for _, w in self.neighbors(x)) / self.mu(x)

    @classmethod
    def from_edges(cls, edges: Iterable[Tuple[int, int, float]], mu=1.0) -> "WeightedGraph":
        """Finite graph from an undirected edge list ``(x, y, omega)``.

        Each undirected edge is given once; the adjacency is
        symmetrized.  Vertices mentioned only in ``mu`` (when a dict)
        are kept as isolated vertices.
        """
        adj: Dict[int, List[Tuple[int, float]]] = {}
        for x, y, w in edges:
            adj.setdefault(x, []).append((y, float(w)))
            adj.setdefault(y, []).append((x, float(w)))
        if isinstance(mu, dict):
            for x in mu:
                adj.setdefault(x, [])
        for lst in adj.values():
            lst.sort()
        ids = tuple(sorted(adj))
        return cls(lambda x: adj.get(x, []), mu, vertex_ids=ids)


@dataclass(frozen=True)
class GraphWindow:
    """Finite induced window of a graph with boundary marking.

    ``interior`` holds the vertices whose full neighbor list lies
    inside the window; ``boundary`` is the rest.  ``edges`` lists each
    window edge once as ``(x, y, omega)`` with ``x < y``.  ``mu`` and
    ``dist`` record the vertex measure and the ball-search distances
    that produced the window.
    """

    vertices: Tuple[int, ...]
    interior: frozenset
    boundary: frozenset
    edges: Tuple[Tuple[int, int, float], ...]
    mu: Dict[int, float]
    dist: Optional[Dict[int, float]] = None

    def __contains__(self, x: int) -> bool:
        return x in self.mu

    def __len__(self) -> int:
        return len(self.vertices)


@dataclass
class VertexFunction:
    """Real-valued function on vertices, defined on a window.

    Outside its window the function is extended by zero (the Dirichlet
    convention).  Without a window, evaluation is strict: reading an
    undefined vertex raises ``KeyError`` naming it.
    """

    values: Dict[int, float]
    window: Optional[GraphWindow] = None

    def __call__(self, x: int) -> float:
        v = self.values.get(x)
        if v is not None:
            return v
        if self.window is not None and x not in self.window:
            return 0.0
        raise KeyError(f"function undefined at vertex {x}")

    def get0(self, x: int) -> float:
        """Value with zero extension everywhere (finite-support view)."""
        return self.values.get(x, 0.0)

    def support(self) -> List[int]:
        return sorted(x for x, v in self.values.items() if v != 0.0)


def validate(g: WeightedGraph, window: GraphWindow) -> List[str]:
    """Check the weighted-graph invariants on a finite window.

    Returns a list of human-readable violations: omega symmetry,
    positivity, no self-loops, positive vertex measure, and sorted
    deterministic neighbor lists.  An empty list means the window is
    valid.
    """
    problems = []
    wset = window.mu
    for x in window.vertices:
        if g.mu(x) <= 0:
            problems.append(f"measure positivity at {x}")
        nbrs = list(g.neighbors(x))
        ids = [y for y, _ in nbrs]
        if ids != sorted(ids):
            problems.append(f"neighbor list of {x} not sorted")
        for y, w in nbrs:
            if y == x:
                problems.append(f"self-loop at {x}")
                continue
            if w <= 0:
                problems.append(f"weight positivity at ({x},{y})")
            if y in wset:
                back = dict(g.neighbors(y)).get(x)
                if back is None:
                    problems.append(f"symmetry violation at ({x},{y}): missing reverse edge")
                elif back != w:
                    problems.append(f"symmetry violation at ({x},{y})")
    return problems


def formal_laplacian(g: WeightedGraph, u: VertexFunction, x: int) -> float:
    """Formal Laplacian (1/mu(x)) * sum_y omega(x,y) (u(x) - u(y)).

    ``u`` must be defined at ``x`` and at every neighbor of ``x``; a
    missing value raises ``KeyError`` naming the vertex.
    """
    ux = u(x)
    acc = 0.0
    for y, w in g.neighbors(x):
        acc += w * (ux - u(y))
    return acc / g.mu(x)


def energy(g: WeightedGraph, u: VertexFunction, v: VertexFunction) -> float:
    """Graph energy form (1/2) sum_x sum_y omega(x,y)(u(x)-u(y))(v(x)-v(y)).

    Both functions are treated as finitely supported (zero outside
    their stored values).  Edges with both endpoints in the combined
    support are halved because the sweep visits them from both ends.
    """
    supp = set(u.values) | set(v.values)
    acc = 0.0
    for x in supp:
        ux, vx = u.get0(x), v.get0(x)
        for y, w in g.neighbors(x):
            term = w * (ux - u.get0(y)) * (vx - v.get0(y))
            acc += 0.5 * term if y in supp else term
    return acc


def _edge_length_fn(lengths) -> Callable[[int, int], float]:
    # accepts None (unit lengths), an EdgeLengths-like object, a
    # PathMetric-like object, or a plain callable
    if lengths is None:
        return lambda x, y: 1.0
    if hasattr(lengths, "sigma"):
        return lengths.sigma
    if hasattr(lengths, "distance"):
        return lengths.distance
    return lengths


def truncate_by_jump_size(g: WeightedGraph, d, c0: float) -> WeightedGraph:
    """Drop every edge longer than the jump size c0.

    Returns the weighted graph (V, omega', mu) with omega' = omega on
    edges where d <= c0 and omega' = 0 elsewhere.  The vertex set and
    measure are unchanged; the result may be disconnected.
    """
    if c0 <= 0:
        raise ValueError(f"jump size c0 must be positive, got {c0}")
    dist = _edge_length_fn(d)

    def source(x, _g=g, _dist=dist, _c0=c0):
        return [(y, w) for y, w in _g.neighbors(x) if _dist(x, y) <= _c0]

    return WeightedGraph(source, g.mu, vertex_ids=g.vertex_ids)


def _dijkstra_ball(g: WeightedGraph, lengths, x0: int, r: float, cap: int):
    """Settled distances within the closed ball B(x0, r) under the path
    metric induced by the edge lengths.  Returns ``(dist, truncated)``
    where ``truncated`` is True when the vertex cap was hit first.
    Ties are broken by vertex id, so the settle order is deterministic.
    """
    length = _edge_length_fn(lengths)
    dist: Dict[int, float] = {}
    best = {x0: 0.0}
    heap = [(0.0, x0)]
    while heap:
        d, x = heapq.heappop(heap)
        if x in dist:
            continue
        dist[x] = d
        if len(dist) > cap:
            return dist, True
        for y, w in g.neighbors(x):
            nd = d + length(x, y)
            if nd <= r and y not in dist and nd < best.get(y, float("inf")):
                best[y] = nd
                heapq.heappush(heap, (nd, y))
    return dist, False


def ball_window(g: WeightedGraph, d, x0: int, r: float,
                cap: int = DEFAULT_BALL_CAP) -> GraphWindow:
    """Finite window {y : d_path(x0, y) <= r} with boundary marking.

    Parameters
    ----------
    g : WeightedGraph
    d : edge lengths (``None`` means unit lengths, i.e. the graph
        metric), an EdgeLengths-like object, or a callable on edges
    x0 : center vertex
    r : ball radius, nonnegative
    cap : safety cap on the vertex count; exceeding it raises
        ``BallCapError`` ("ball not finite up to cap")

    The window's ``interior`` is the set of vertices all of whose
    neighbors lie in the window; the rest form the Dirichlet boundary.
    """
    if r < 0:
        raise ValueError(f"radius must be nonnegative, got {r}")
    dist, truncated = _dijkstra_ball(g, d, x0, r, cap)
    if truncated:
        raise BallCapError(f"ball B({x0}, {r}) not finite up to cap {cap}")
    return _window_from_vertices(g, list(dist), dist)


def _window_from_vertices(g: WeightedGraph, vertices: List[int],
                          dist: Optional[Dict[int, float]] = None) -> GraphWindow:
    vset = set(vertices)
    interior = set()
    edges = []
    mu = {}
    for x in vertices:
        mu[x] = g.mu(x)
        inside = True
        for y, w in g.neighbors(x):
            if y in vset:
                if x < y:
                    edges.append((x, y, w))
            else:
                inside = False
        if inside:
            interior.add(x)
    return GraphWindow(
        vertices=tuple(vertices),
        interior=frozenset(interior),
        boundary=frozenset(vset - interior),
        edges=tuple(edges),
        mu=mu,
        dist=dict(dist) if dist is not None else None,
    )


def full_window(g: WeightedGraph) -> GraphWindow:
    """Window covering an entire finite graph (no Dirichlet boundary)."""
    if g.vertex_ids is None:
        raise ValueError("full_window needs a finite graph with a vertex list")
    return _window_from_vertices(g, list(g.vertex_ids))


def load_graph(path) -> WeightedGraph:
    """Load a finite graph from the text format.

    One record per line: ``vertex <id> <mu>`` or ``edge <id1> <id2>
    <omega>``, comments starting with ``#``.  Each undirected edge
    appears exactly once; the loader symmetrizes.  Malformed input
    raises ``GraphFormatError`` with the offending line number.
    """
    mu: Dict[int, float] = {}
    edges: List[Tuple[int, int, float]] = []
    seen = set()
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            try:
                if parts[0] == "vertex" and len(parts) == 3:
                    x, m = int(parts[1]), float(parts[2])
                    if x in mu:
                        raise GraphFormatError(f"line {lineno}: duplicate vertex {x}")
                    mu[x] = m
                elif parts[0] == "edge" and len(parts) == 4:
                    x, y, w = int(parts[1]), int(parts[2]), float(parts[3])
                    key = (min(x, y), max(x, y))
                    if key in seen:
                        raise GraphFormatError(f"line {lineno}: duplicate edge {x} {y}")
                    seen.add(key)
                    edges.append((x, y, w))
                else:
                    raise GraphFormatError(f"line {lineno}: unrecognized record {parts[0]!r}")
            except GraphFormatError:
                raise
            except ValueError as exc:
                raise GraphFormatError(f"line {lineno}: {exc}") from None
    for x, y, _ in edges:
        for v in (x, y):
            if v not in mu:
                raise GraphFormatError(f"edge {x} {y} references undeclared vertex {v}")
    return WeightedGraph.from_edges(edges, mu)


def save_graph(g: WeightedGraph, path, window: Optional[GraphWindow] = None) -> None:
    """Write a finite graph (or a window of an infinite one) in the
    text format read by :func:`load_graph`.
    """
    win = window if window is not None else full_window(g)
    with open(path, "w") as fh:
        for x in win.vertices:
            fh.write(f"vertex {x} {win.mu[x]!r}\n")
        for x, y, w in win.edges:
            fh.write(f"edge {x} {y} {w!r}\n")
