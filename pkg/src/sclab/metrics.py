"""Adapted metrics: edge lengths, path distances, and adaptedness checks.

An edge length assignment sigma with jump size c0 induces a shortest
path metric d.  The metric is weakly adapted when
(1/mu(x)) * sum_y omega(x,y) (d(x,y) /\\ c0)^2 <= 1 at every vertex,
and adapted when additionally d <= c0 on every edge.  Such metrics are
the graph surrogate for intrinsic metrics and are what make ball
volumes and the metric-graph comparison meaningful.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Tuple

from .graph import DEFAULT_BALL_CAP, GraphFormatError, GraphWindow, WeightedGraph

__all__ = [
    "EdgeLengths",
    "PathMetric",
    "AdaptednessReport",
    "degree_metric",
    "path_distance",
    "check_adapted",
    "load_metric",
    "save_metric",
]

# slack for float roundoff in the adaptedness sums, e.g. (1/sqrt(2))^2 * 2
ADAPTED_TOL = 1e-12


@dataclass(frozen=True)
class EdgeLengths:
    """Symmetric positive edge lengths sigma and the jump size c0."""

    sigma_fn: Callable[[int, int], float]
    c0: float = 1.0

    def sigma(self, x: int, y: int) -> float:
        return self.sigma_fn(x, y)

    @classmethod
    def from_table(cls, table: Dict[Tuple[int, int], float], c0: float = 1.0) -> "EdgeLengths":
        """Lengths backed by a dict keyed on undirected edges."""
        def sigma(x, y, _t=dict(table)):
            s = _t.get((x, y) if x < y else (y, x))
            if s is None:
                raise KeyError(f"no length for edge ({x},{y})")
            return s
        return cls(sigma, c0)


def degree_metric(g: WeightedGraph, c0: float = 1.0) -> EdgeLengths:
    """Adapted-by-construction edge lengths from weighted degrees.

    sigma(x,y) = min(c0, Deg(x)^(-1/2), Deg(y)^(-1/2)) with
    Deg(x) = (1/mu(x)) sum_y omega(x,y).  Then
    sum_y omega(x,y) sigma(x,y)^2 <= sum_y omega(x,y)/Deg(x) = mu(x),
    so the induced path metric always passes :func:`check_adapted`.
    """
    if c0 <= 0:
        raise ValueError(f"jump size c0 must be positive, got {c0}")
    cache: Dict[int, float] = {}

    def inv_sqrt_deg(x):
        v = cache.get(x)
        if v is None:
            v = g.degree(x) ** -0.5
            cache[x] = v
        return v

    def sigma(x, y):
        return min(c0, inv_sqrt_deg(x), inv_sqrt_deg(y))

    return EdgeLengths(sigma, c0)


class PathMetric:
    """Shortest-path metric induced by edge lengths, with per-root caches.

    Distance queries run Dijkstra from the root with deterministic
    tie-breaking by vertex id and resume where the previous query on
    the same root stopped.  Queries that would settle more than ``cap``
    vertices without reaching the target return ``inf`` (the
    "unreachable within cap" marker).
    """

    def __init__(self, g: WeightedGraph, lengths: EdgeLengths,
                 cap: int = DEFAULT_BALL_CAP):
        self.g = g
        self.lengths = lengths
        self.cap = cap
        self._roots: Dict[int, tuple] = {}

    @property
    def c0(self) -> float:
        return self.lengths.c0

    def distance(self, x: int, y: int) -> float:
        if x == y:
            return 0.0
        state = self._roots.get(x)
        if state is None and y in self._roots and x in self._roots[y][0]:
            return self._roots[y][0][x]
        return self._advance(x, y)

    def _advance(self, root: int, target: int) -> float:
        dist, best, heap = self._roots.setdefault(root, ({}, {root: 0.0}, [(0.0, root)]))
        if target in dist:
            return dist[target]
        sigma = self.lengths.sigma
        while heap:
            d, v = heapq.heappop(heap)
            if v in dist:
                continue
            dist[v] = d
            for w, _omega in self.g.neighbors(v):
                if w not in dist:
                    nd = d + sigma(v, w)
                    if nd < best.get(w, math.inf):
                        best[w] = nd
                        heapq.heappush(heap, (nd, w))
            if v == target:
                return d
            if len(dist) > self.cap:
                break
        return math.inf


def path_distance(m: PathMetric, x: int, y: int) -> float:
    """Length of the shortest path from x to y (exact on finite windows)."""
    return m.distance(x, y)


@dataclass(frozen=True)
class AdaptednessReport:
    verdict: str                 # adapted | weakly_adapted | neither
    worst_sum: float             # max over interior x of the defining sum
    worst_vertex: Optional[int]
    longest_edge: float          # max path distance over window edges
    c0: float

    def __str__(self):
        return (f"{self.verdict} (worst sum {self.worst_sum:.6g} at vertex "
                f"{self.worst_vertex}, longest edge {self.longest_edge:.6g}, "
                f"c0 {self.c0:.6g})")


def check_adapted(g: WeightedGraph, d: PathMetric, c0: float,
                  window: GraphWindow) -> AdaptednessReport:
    """Classify a path metric on a window as adapted, weakly adapted,
    or neither.

    Weakly adapted means (1/mu(x)) sum_y omega(x,y) (d(x,y) /\\ c0)^2 <= 1
    for every interior vertex x; adapted requires additionally
    d(x,y) <= c0 on every window edge.  Only interior vertices are
    judged because boundary vertices have truncated sums.
    """
    worst_sum = 0.0
    worst_vertex = None
    for x in window.vertices:
        if x not in window.interior:
            continue
        acc = 0.0
        for y, w in g.neighbors(x):
            acc += w * min(d.distance(x, y), c0) ** 2
        acc /= g.mu(x)
        if acc > worst_sum:
            worst_sum, worst_vertex = acc, x
    longest = max((d.distance(x, y) for x, y, _ in window.edges), default=0.0)
    if worst_sum <= 1.0 + ADAPTED_TOL:
        verdict = "adapted" if longest <= c0 + ADAPTED_TOL else "weakly_adapted"
    else:
        verdict = "neither"
    return AdaptednessReport(verdict, worst_sum, worst_vertex, longest, c0)


def load_metric(path) -> EdgeLengths:
    """Load edge lengths from the metric text format.

    Records: ``len <id1> <id2> <length>`` plus a single ``c0 <value>``
    line; ``#`` starts a comment.  A missing c0 line defaults to 1.
    """
    table: Dict[Tuple[int, int], float] = {}
    c0 = None
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            try:
                if parts[0] == "len" and len(parts) == 4:
                    x, y, s = int(parts[1]), int(parts[2]), float(parts[3])
                    if s <= 0:
                        raise GraphFormatError(f"line {lineno}: nonpositive length")
                    table[(min(x, y), max(x, y))] = s
                elif parts[0] == "c0" and len(parts) == 2:
                    if c0 is not None:
                        raise GraphFormatError(f"line {lineno}: duplicate c0 record")
                    c0 = float(parts[1])
                else:
                    raise GraphFormatError(f"line {lineno}: unrecognized record {parts[0]!r}")
            except GraphFormatError:
                raise
            except ValueError as exc:
                raise GraphFormatError(f"line {lineno}: {exc}") from None
    return EdgeLengths.from_table(table, 1.0 if c0 is None else c0)


def save_metric(lengths: EdgeLengths, window: GraphWindow, path) -> None:
    """Write the lengths of a window's edges in the metric text format."""
    with open(path, "w") as fh:
        fh.write(f"c0 {lengths.c0!r}\n")
        for x, y, _ in window.edges:
            fh.write(f"len {x} {y} {lengths.sigma(x, y)!r}\n")
