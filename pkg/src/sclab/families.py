"""Deterministic generators for the canonical example families.

birth_death and anti_tree are the two infinite families everything else
is exercised against: the birth-death chain has a classical
summability oracle, and the anti-tree is the standard example whose
graph-metric volume growth is polynomial even though the graph is
stochastically incomplete.  lattice, random_tree, and random_graph are
test plumbing.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from itertools import accumulate
from typing import Callable, Dict, List, Tuple

import numpy as np

from .graph import WeightedGraph

__all__ = [
    "FamilySpec",
    "birth_death",
    "anti_tree",
    "sphere_sizes",
    "anti_tree_reduction",
    "random_graph",
    "lattice",
    "random_tree",
    "generate",
]

FAMILY_KINDS = ("birth_death", "anti_tree", "lattice", "random_tree", "file")

# ids for the integer lattice pack signed coordinates into one 64-bit int
_LATTICE_OFF = 1 << 30


def birth_death(alpha: float) -> WeightedGraph:
    """Birth-death chain on the naturals: omega(n, n+1) = (n+1)^alpha, mu = 1.

    alpha > 2 is stochastically incomplete, alpha <= 2 complete
    (Reuter criterion); alpha = 2 sits exactly on the boundary.
    """
    def source(n, _a=float(alpha)):
        if n == 0:
            return [(1, 1.0)]
        return [(n - 1, float(n) ** _a), (n + 1, float(n + 1) ** _a)]

    return WeightedGraph(source, 1.0)


def sphere_sizes(a: float, k_max: int) -> List[int]:
    """Anti-tree sphere sizes |S_0| = 1, |S_k| = ceil(k^a) for k >= 1."""
    return [1] + [math.ceil(k ** a) for k in range(1, k_max + 1)]


def anti_tree(a: float, depth_cap: int = 64,
              max_degree: int = 5_000_000) -> WeightedGraph:
    """Anti-tree: spheres S_k of size ceil(k^a), consecutive spheres
    joined completely, omega = mu = 1.

    The graph is generated lazily out to sphere ``depth_cap``; windows
    must stay strictly inside that depth for the graph to behave as the
    infinite family.  Vertices of one sphere share a single neighbor
    list, so windows with very wide spheres stay affordable.  A sphere
    whose vertices would exceed ``max_degree`` neighbors aborts
    generation (local-finiteness guard).
    """
    if a < 0:
        raise ValueError(f"sphere exponent must be nonnegative, got {a}")
    sizes = sphere_sizes(a, depth_cap)
    offsets = [0] + list(accumulate(sizes))
    shared: Dict[int, List[Tuple[int, float]]] = {}

    def source(v):
        if not 0 <= v < offsets[-1]:
            raise KeyError(f"vertex {v} outside the generated anti-tree")
        k = bisect_right(offsets, v) - 1
        lst = shared.get(k)
        if lst is None:
            count = (sizes[k - 1] if k > 0 else 0) + \
                    (sizes[k + 1] if k + 1 <= depth_cap else 0)
            if count > max_degree:
                raise RuntimeError(
                    f"anti-tree sphere {k} needs {count} neighbors per vertex, "
                    f"above the local-finiteness cap {max_degree}")
            lst = []
            if k > 0:
                lst.extend((offsets[k - 1] + j, 1.0) for j in range(sizes[k - 1]))
            if k + 1 <= depth_cap:
                lst.extend((offsets[k + 1] + j, 1.0) for j in range(sizes[k + 1]))
            shared[k] = lst
        return lst

    return WeightedGraph(source, 1.0)


def anti_tree_reduction(a: float) -> Tuple[Callable[[int], float], Callable[[int], float]]:
    """Birth-death reduction of the anti-tree.

    Collapsing each sphere to one vertex gives mu_eff(k) = |S_k| and
    omega_eff(k, k+1) = |S_k| * |S_k+1| (complete bipartite joins), so
    the classical chain oracle applies to the anti-tree.
    """
    def size(k):
        return 1.0 if k == 0 else float(math.ceil(k ** a))

    return size, (lambda k: size(k) * size(k + 1))


def random_graph(n: int, edge_prob: float, weight_range=(0.5, 2.0),
                 seed: int = 0) -> WeightedGraph:
    """Seeded Erdos-Renyi test graph, largest component kept.

    Edge weights are uniform in ``weight_range`` and the vertex measure
    uniform in (0.5, 2.0), both drawn deterministically from the seed.
    """
    if not 1 <= n <= 10_000:
        raise ValueError(f"vertex count must be in [1, 10^4], got {n}")
    rng = np.random.Generator(np.random.PCG64(seed))
    mu_all = 0.5 + 1.5 * rng.random(n)
    adj: Dict[int, List[Tuple[int, float]]] = {x: [] for x in range(n)}
    for x in range(n):
        hit = np.nonzero(rng.random(n - x - 1) < edge_prob)[0]
        ws = weight_range[0] + (weight_range[1] - weight_range[0]) * rng.random(len(hit))
        for j, w in zip(hit, ws):
            y = x + 1 + int(j)
            adj[x].append((y, float(w)))
            adj[y].append((x, float(w)))

    # keep the largest connected component, ties broken by smallest id
    unseen = set(range(n))
    best: List[int] = []
    while unseen:
        start = min(unseen)
        comp, stack = {start}, [start]
        unseen.discard(start)
        while stack:
            x = stack.pop()
            for y, _ in adj[x]:
                if y in unseen:
                    unseen.discard(y)
                    comp.add(y)
                    stack.append(y)
        if len(comp) > len(best):
            best = sorted(comp)
    keep = set(best)
    final = {x: sorted((y, w) for y, w in adj[x] if y in keep) for x in best}
    mu = {x: float(mu_all[x]) for x in best}
    return WeightedGraph(lambda x: final.get(x, []), mu, vertex_ids=tuple(best))


def lattice() -> WeightedGraph:
    """Infinite square lattice Z^2 with omega = mu = 1 (complete graph
    in the stochastic sense; useful as a sanity family)."""
    def pack(x, y):
        return ((x + _LATTICE_OFF) << 31) | (y + _LATTICE_OFF)

    def source(v):
        y = (v & ((1 << 31) - 1)) - _LATTICE_OFF
        x = (v >> 31) - _LATTICE_OFF
        ids = [pack(x - 1, y), pack(x + 1, y), pack(x, y - 1), pack(x, y + 1)]
        return [(i, 1.0) for i in sorted(ids)]

    return WeightedGraph(source, 1.0)


def lattice_origin() -> int:
    """Vertex id of (0, 0) in the lattice family."""
    return (_LATTICE_OFF << 31) | _LATTICE_OFF


def random_tree(n: int, seed: int = 0) -> WeightedGraph:
    """Seeded random recursive tree on n vertices, omega = mu = 1."""
    if n < 1:
        raise ValueError(f"vertex count must be positive, got {n}")
    rng = np.random.Generator(np.random.PCG64(seed))
    edges = [(int(rng.integers(0, k)), k, 1.0) for k in range(1, n)]
    return WeightedGraph.from_edges(edges, {k: 1.0 for k in range(n)})


@dataclass(frozen=True)
class FamilySpec:
    """Declarative description of a generated family instance."""

    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in FAMILY_KINDS:
            raise ValueError(f"unknown family kind {self.kind!r}; "
                             f"expected one of {FAMILY_KINDS}")


def generate(spec: FamilySpec) -> WeightedGraph:
    """Instantiate a family from its spec (deterministic)."""
    p = spec.params
    if spec.kind == "birth_death":
        return birth_death(p.get("alpha", 1.0))
    if spec.kind == "anti_tree":
        return anti_tree(p.get("a", 3.0), p.get("depth_cap", 64))
    if spec.kind == "lattice":
        return lattice()
    if spec.kind == "random_tree":
        return random_tree(p.get("n", 100), p.get("seed", 0))
    raise ValueError(f"family kind {spec.kind!r} needs a graph file")
