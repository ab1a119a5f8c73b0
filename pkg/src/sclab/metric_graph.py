"""Metric graph over a weighted graph, with an exact polynomial calculus.

Given (V, omega, mu) and an adapted path metric d, each undirected edge
(x, y) becomes a marked interval I(e) = [0, l(e)] with

    l(e) = d(x, y),    p(e) = q(e) = omega(x, y) * d(x, y),

so the interval carries measure mu_hat(I(e)) = q(e) * l(e) = omega * d^2
and the Dirichlet form eps_hat(f, g) = sum_e p(e) int f' g' dt.  The
point of the construction: vertex functions interpolate to functions on
the metric graph with exactly matching energies, the quotient metric
d_l dominates d, and balls lose measure, so completeness transfers.

Functions on the metric graph are continuous piecewise polynomials of
degree <= 2 per edge, with quadratic pieces of leading coefficient
exactly 1/2 (second derivative 1, the form used by the maximum
principle extension).  Every integral here is an exact polynomial
antiderivative; there is no quadrature error, which is what makes
machine-epsilon residual checks meaningful.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .graph import GraphFormatError, GraphWindow, VertexFunction, WeightedGraph
from .metrics import PathMetric, check_adapted

__all__ = [
    "MetricGraph",
    "EdgePoint",
    "PiecewisePoly",
    "build",
    "interpolate",
    "restrict",
    "woymp_extend",
    "boundary_derivatives",
    "energy_form",
    "ibp_check",
    "hat_function",
    "quotient_distance",
    "ball_measure",
    "compare_lemma",
    "woymp_inequality_check",
    "interpolation_bounds_check",
    "sobolev_check",
    "trace_constant",
    "dump_metric_graph",
    "load_metric_graph",
    "dump_poly",
    "load_poly",
]


@dataclass(frozen=True)
class MetricGraph:
    """Oriented metric graph: per edge source/target, length l, weights p = q.

    ``star[x]`` lists ``(edge index, end)`` pairs with end 0 when x is
    the source (t = 0) and 1 when x is the target (t = l).  ``mu``
    carries the vertex measure of the underlying window for the
    comparison lemma.  Construction warnings (e.g. a non-adapted
    metric) are recorded, not raised.
    """

    vertices: Tuple[int, ...]
    src: np.ndarray
    dst: np.ndarray
    l: np.ndarray
    p: np.ndarray
    q: np.ndarray
    omega: np.ndarray
    star: Dict[int, Tuple[Tuple[int, int], ...]]
    mu: Dict[int, float]
    c0: float
    warnings: Tuple[str, ...] = ()
    _dl_cache: Dict[int, Dict[int, float]] = field(default_factory=dict, repr=False)

    @property
    def n_edges(self) -> int:
        return len(self.l)

    def edge_measure(self) -> np.ndarray:
        """Per-edge quotient measure mu_hat(I(e)) = q(e) * l(e) = omega * d^2."""
        return self.q * self.l

    def total_measure(self) -> float:
        return float(self.edge_measure().sum())

    def mu_special(self, x: int) -> float:
        """The reduced vertex measure sum_y omega(x,y) d(x,y)^2."""
        return float(sum(self.q[e] * self.l[e] for e, _ in self.star.get(x, ())))

    def edge_between(self, x: int, y: int) -> Optional[int]:
        for e, _ in self.star.get(x, ()):
            if self.src[e] == y or self.dst[e] == y:
                return int(e)
        return None

    def vertex_distances(self, x0: int) -> Dict[int, float]:
        """Quotient metric d_l from x0 to every vertex (Dijkstra over l)."""
        cached = self._dl_cache.get(x0)
        if cached is not None:
            return cached
        dist: Dict[int, float] = {}
        best = {x0: 0.0}
        heap = [(0.0, x0)]
        while heap:
            dd, x = heapq.heappop(heap)
            if x in dist:
                continue
            dist[x] = dd
            for e, end in self.star.get(x, ()):
                y = int(self.dst[e] if end == 0 else self.src[e])
                nd = dd + float(self.l[e])
                if y not in dist and nd < best.get(y, math.inf):
                    best[y] = nd
                    heapq.heappush(heap, (nd, y))
        self._dl_cache[x0] = dist
        return dist


@dataclass(frozen=True)
class EdgePoint:
    """Point t along the marked interval of edge ``edge`` (arclength)."""

    edge: int
    t: float


def build(g: WeightedGraph, d: PathMetric, window: GraphWindow,
          orientation: str = "canonical") -> MetricGraph:
    """Build the metric graph of (V, omega, mu, d) on a window.

    Edge lengths are path distances, which may undercut the raw edge
    length sigma when a shorter route exists.  Each undirected edge
    gets one oriented copy; ``orientation`` is "canonical" (smaller id
    is the source) or "flipped", and every result downstream is
    orientation-independent.  A metric that fails :func:`check_adapted`
    on the window is recorded as a warning, not an error.
    """
    if orientation not in ("canonical", "flipped"):
        raise ValueError(f"unknown orientation {orientation!r}")
    warnings = []
    report = check_adapted(g, d, d.c0, window)
    if report.verdict != "adapted":
        warnings.append(f"metric is {report.verdict} on the window: {report}")
    src: List[int] = []
    dst: List[int] = []
    ll: List[float] = []
    om: List[float] = []
    for x, y, w in window.edges:
        if orientation == "flipped":
            x, y = y, x
        length = d.distance(x, y)
        if not 0.0 < length < math.inf:
            raise ValueError(f"edge ({x},{y}) has no positive finite length")
        src.append(x)
        dst.append(y)
        ll.append(length)
        om.append(w)
    l_arr = np.array(ll)
    om_arr = np.array(om)
    p_arr = om_arr * l_arr
    star: Dict[int, List[Tuple[int, int]]] = {x: [] for x in window.vertices}
    for e in range(len(src)):
        star[src[e]].append((e, 0))
        star[dst[e]].append((e, 1))
    return MetricGraph(
        vertices=tuple(window.vertices),
        src=np.array(src, np.int64),
        dst=np.array(dst, np.int64),
        l=l_arr,
        p=p_arr,
        q=p_arr.copy(),
        omega=om_arr,
        star={x: tuple(v) for x, v in star.items()},
        mu=dict(window.mu),
        c0=d.c0,
        warnings=tuple(warnings),
    )


@dataclass
class PiecewisePoly:
    """Continuous piecewise polynomial on a metric graph.

    Per edge the function is a*t^2 + b*t + c with a in {0, 1/2};
    ``vertex_values`` pins the shared endpoint values, and continuity
    (c = value at the source, a l^2 + b l + c = value at the target) is
    a construction invariant checked by :meth:`validate`.
    """

    X: MetricGraph
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    vertex_values: Dict[int, float]

    def value(self, e: int, t: float) -> float:
        return float((self.a[e] * t + self.b[e]) * t + self.c[e])

    def value_at(self, pt: EdgePoint) -> float:
        if not 0.0 <= pt.t <= self.X.l[pt.edge]:
            raise ValueError(f"t={pt.t} outside [0, {self.X.l[pt.edge]}]")
        return self.value(pt.edge, pt.t)

    def at_vertex(self, x: int) -> float:
        return self.vertex_values[x]

    def validate(self, tol: float = 1e-9) -> List[str]:
        problems = []
        X = self.X
        for e in range(X.n_edges):
            if self.a[e] not in (0.0, 0.5):
                problems.append(f"edge {e}: leading coefficient {self.a[e]} not in {{0, 1/2}}")
            v0 = self.value(e, 0.0)
            v1 = self.value(e, float(X.l[e]))
            scale = 1.0 + abs(v0) + abs(v1)
            if abs(v0 - self.vertex_values[int(X.src[e])]) > tol * scale:
                problems.append(f"edge {e}: discontinuous at source")
            if abs(v1 - self.vertex_values[int(X.dst[e])]) > tol * scale:
                problems.append(f"edge {e}: discontinuous at target")
        return problems


def _vertex_array(X: MetricGraph, u: VertexFunction, which: np.ndarray) -> np.ndarray:
    return np.array([u(int(x)) for x in which])


def interpolate(X: MetricGraph, w: VertexFunction) -> PiecewisePoly:
    """Linear interpolation: w_hat is linear on every edge with
    w_hat|_V = w.  restrict(interpolate(w)) == w exactly."""
    ws = _vertex_array(X, w, X.src)
    wd = _vertex_array(X, w, X.dst)
    a = np.zeros(X.n_edges)
    b = (wd - ws) / X.l
    return PiecewisePoly(X, a, b, ws.copy(),
                         {x: w(x) for x in X.vertices})


def restrict(f: PiecewisePoly) -> VertexFunction:
    """Vertex values of a metric-graph function (section of interpolate)."""
    return VertexFunction(dict(f.vertex_values))


def woymp_extend(X: MetricGraph, u: VertexFunction, threshold: float) -> PiecewisePoly:
    """Extend u to the metric graph, bending edges that meet the
    superlevel set Omega = {u > threshold}.

    Edges with an endpoint in Omega solve v'' = 1 with Dirichlet
    endpoint values u; all other edges interpolate linearly.  The
    quadratic piece is v(t) = t^2/2 + ((u(y)-u(x))/l - l/2) t + u(x),
    convex, so the edge maximum always sits at an endpoint.
    """
    ws = _vertex_array(X, u, X.src)
    wd = _vertex_array(X, u, X.dst)
    in_omega = {x for x in X.vertices if u(x) > threshold}
    quad = np.array([int(X.src[e]) in in_omega or int(X.dst[e]) in in_omega
                     for e in range(X.n_edges)])
    a = np.where(quad, 0.5, 0.0)
    b = (wd - ws) / X.l - a * X.l
    return PiecewisePoly(X, a, b, ws.copy(), {x: u(x) for x in X.vertices})


def boundary_derivatives(f: PiecewisePoly, e: int) -> Tuple[float, float]:
    """(f'(0), f'(l)) on edge e; both equal the slope on linear edges,
    and differ by l on quadratic ones (f'' = 1)."""
    le = float(f.X.l[e])
    return float(f.b[e]), float(2.0 * f.a[e] * le + f.b[e])


def _int_poly(coeffs: Sequence[np.ndarray], l: np.ndarray) -> np.ndarray:
    """Exact integral over [0, l] of sum_k coeffs[k] t^k, vectorized."""
    acc = np.zeros_like(l)
    power = l.copy()
    for k, ck in enumerate(coeffs):
        acc = acc + ck * power / (k + 1)
        power = power * l
    return acc


def energy_form(X: MetricGraph, f: PiecewisePoly, g: PiecewisePoly) -> float:
    """Bilinear form eps_hat(f, g) = sum_e p(e) int f' g' dt, exactly.

    f' g' = 4 a1 a2 t^2 + 2(a1 b2 + a2 b1) t + b1 b2 per edge.
    """
    integ = _int_poly(
        [f.b * g.b, 2.0 * (f.a * g.b + g.a * f.b), 4.0 * f.a * g.a], X.l)
    return float((X.p * integ).sum())


def ibp_check(X: MetricGraph, v: PiecewisePoly, phi: PiecewisePoly) -> float:
    """Residual of integration by parts:

        eps_hat(v, phi) = -sum_e p int v'' phi + sum_e p [v' phi]_0^l.

    ``phi`` must be piecewise linear (continuous, finitely supported);
    the residual is a pure roundoff quantity, <= 1e-12 on sane inputs.
    """
    if np.any(phi.a != 0.0):
        raise ValueError("phi must be piecewise linear")
    lhs = energy_form(X, v, phi)
    vpp = 2.0 * v.a
    int_phi = _int_poly([phi.c, phi.b], X.l)
    phi0 = phi.c
    phil = phi.b * X.l + phi.c
    d0 = v.b
    dl = 2.0 * v.a * X.l + v.b
    rhs = float((X.p * (-vpp * int_phi + dl * phil - d0 * phi0)).sum())
    return abs(lhs - rhs)


def hat_function(X: MetricGraph, x: int) -> PiecewisePoly:
    """Piecewise-linear hat: 1 at x, 0 at every neighbor and beyond.

    The continuous analogue of the cut-off used to probe vertex x;
    supported on the closed star of x, with closed-form integrals.
    """
    if x not in X.star and x not in X.mu:
        raise KeyError(f"vertex {x} not in the metric graph")
    n = X.n_edges
    a = np.zeros(n)
    b = np.zeros(n)
    c = np.zeros(n)
    for e, end in X.star.get(x, ()):
        if end == 0:
            c[e] = 1.0
            b[e] = -1.0 / float(X.l[e])
        else:
            b[e] = 1.0 / float(X.l[e])
    values = {y: 0.0 for y in X.vertices}
    values[x] = 1.0
    return PiecewisePoly(X, a, b, c, values)


def quotient_distance(X: MetricGraph, x0: int, pt: EdgePoint) -> float:
    """d_l from vertex x0 to an edge point: enter from either endpoint,
    min(d_l(x0, src) + t, d_l(x0, dst) + l - t)."""
    le = float(X.l[pt.edge])
    if not 0.0 <= pt.t <= le:
        raise ValueError(f"t={pt.t} outside [0, {le}]")
    dl = X.vertex_distances(x0)
    via_s = dl.get(int(X.src[pt.edge]), math.inf) + pt.t
    via_t = dl.get(int(X.dst[pt.edge]), math.inf) + le - pt.t
    return min(via_s, via_t)


def ball_measure(X: MetricGraph, x0: int, r: float) -> float:
    """Exact quotient measure of the d_l ball of radius r around x0.

    Each edge contributes q(e) times its covered length
    min(l, max(0, r - a) + max(0, r - b)) where a, b are the endpoint
    distances; partially covered edges are handled exactly.
    """
    if r < 0:
        raise ValueError(f"radius must be nonnegative, got {r}")
    dl = X.vertex_distances(x0)
    a = np.array([dl.get(int(s), math.inf) for s in X.src])
    bv = np.array([dl.get(int(t), math.inf) for t in X.dst])
    with np.errstate(invalid="ignore"):
        covered = np.minimum(X.l, np.maximum(0.0, r - a) + np.maximum(0.0, r - bv))
    covered = np.where(np.isnan(covered), 0.0, np.maximum(covered, 0.0))
    return float((X.q * covered).sum())


@dataclass(frozen=True)
class CompareReport:
    """Worst-case margins for the two comparison inequalities."""

    metric_margin: float          # min over pairs of d_l - d (>= 0 expected)
    metric_worst_pair: Optional[Tuple[int, int]]
    volume_margin: float          # min over radii of mu(B_d) - mu_hat(B_dl)
    volume_worst_radius: Optional[float]
    ok: bool


def compare_lemma(g: WeightedGraph, d: PathMetric, X: MetricGraph, x0: int,
                  radii: Sequence[float], max_pairs: int = 1000) -> CompareReport:
    """Check the two comparison inequalities on a window:
    d <= d_l on vertex pairs, and mu_hat(B_dl(x0, r)) <= mu(B_d(x0, r))
    at each radius.  Returns the worst margins (negative = violation).
    """
    verts = list(X.vertices)
    pairs = [(x, y) for i, x in enumerate(verts) for y in verts[i + 1:]]
    if len(pairs) > max_pairs:
        stride = len(pairs) // max_pairs + 1
        pairs = pairs[::stride]
    metric_margin, metric_pair = math.inf, None
    for x, y in pairs:
        dl = X.vertex_distances(x).get(y, math.inf)
        dg = d.distance(x, y)
        margin = dl - dg if dl < math.inf else math.inf
        if margin < metric_margin:
            metric_margin, metric_pair = margin, (x, y)
    vol_margin, vol_radius = math.inf, None
    for r in radii:
        graph_ball = sum(X.mu[x] for x in verts if d.distance(x0, x) <= r)
        margin = graph_ball - ball_measure(X, x0, r)
        if margin < vol_margin:
            vol_margin, vol_radius = margin, float(r)
    ok = metric_margin >= -1e-12 and vol_margin >= -1e-12
    return CompareReport(float(metric_margin), metric_pair,
                         float(vol_margin), vol_radius, ok)


def _superlevel_intervals(f: PiecewisePoly, e: int, theta: float):
    """Subintervals of [0, l(e)] where f > theta, exactly.

    Linear pieces give at most one interval; quadratic pieces are
    convex (f'' = 1), so {f <= theta} is a single interval and the
    superlevel set is at most two end segments.
    """
    le = float(f.X.l[e])
    a, b, c = float(f.a[e]), float(f.b[e]), float(f.c[e])
    if a == 0.0:
        if b == 0.0:
            return [(0.0, le)] if c > theta else []
        t_cross = (theta - c) / b
        if b > 0:
            lo, hi = max(0.0, t_cross), le
        else:
            lo, hi = 0.0, min(le, t_cross)
        return [(lo, hi)] if lo < hi else []
    # convex parabola: solve a t^2 + b t + (c - theta) = 0
    disc = b * b - 4.0 * a * (c - theta)
    if disc <= 0.0:
        return [(0.0, le)]    # never dips to theta
    root = math.sqrt(disc)
    t1 = (-b - root) / (2.0 * a)
    t2 = (-b + root) / (2.0 * a)
    out = []
    if t1 > 0.0:
        out.append((0.0, min(t1, le)))
    if t2 < le:
        out.append((max(t2, 0.0), le))
    return [(lo, hi) for lo, hi in out if lo < hi]


def _integral_on(f: PiecewisePoly, e: int, lo: float, hi: float) -> float:
    """Exact integral of f over [lo, hi] on edge e (plain dt measure)."""
    a, b, c = float(f.a[e]), float(f.b[e]), float(f.c[e])

    def anti(t):
        return ((a / 3.0 * t + b / 2.0) * t + c) * t

    return anti(hi) - anti(lo)


@dataclass(frozen=True)
class WoympChainReport:
    status: str                        # ok | violated | inapplicable
    margins: Dict[int, float]          # per hat center: rhs - lhs (>= 0 ok)
    worst_margin: float
    detail: str = ""


def woymp_inequality_check(g: WeightedGraph, d: PathMetric, X: MetricGraph,
                           u: VertexFunction, alpha: float,
                           window: GraphWindow,
                           tol: float = 1e-10) -> WoympChainReport:
    """Certify the maximum-principle transfer chain on a window.

    After normalizing u by alpha so the violation level is 1, let
    v extend u/alpha quadratically over edges meeting
    Omega_1 = {u/alpha > sup(u/alpha) - 1}.  For every vertex-centered
    hat phi_x with x interior in Omega_1 the chain requires

        eps_hat(v, phi_x) <= -int_{Omega_1_hat} phi_x d(mu_hat) + tol.

    Inapplicable (distinct status) when the discrete precondition
    Delta u <= -alpha on Omega_1 /\\ interior fails.
    """
    from .completeness import WoympCertificate, woymp_check

    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    un = VertexFunction({x: u(x) / alpha for x in window.vertices}, window)
    u_star = max(un(x) for x in window.vertices)
    cert = WoympCertificate(un, 1.0, u_star)
    pre = woymp_check(g, cert, window)
    if pre.status != "violating":
        return WoympChainReport("inapplicable", {}, math.nan,
                                f"precondition not met: {pre.status}")
    theta = u_star - 1.0
    v = woymp_extend(X, un, theta)
    margins: Dict[int, float] = {}
    worst = math.inf
    for x in pre.witnesses:
        phi = hat_function(X, x)
        lhs = energy_form(X, v, phi)
        mass = 0.0
        for e, _ in X.star.get(x, ()):
            for lo, hi in _superlevel_intervals(v, e, theta):
                mass += float(X.q[e]) * _integral_on(phi, e, lo, hi)
        margin = (-mass + tol) - lhs
        margins[x] = margin
        worst = min(worst, margin)
    status = "ok" if worst >= 0.0 else "violated"
    return WoympChainReport(status, margins, float(worst))


@dataclass(frozen=True)
class InterpolationReport:
    """Per-edge and global residuals for the interpolation identities."""

    energy_residual: float        # |eps_hat(w_hat, w_hat) - energy(w, w)| via edge sums
    l2_residual: float            # worst |omega d int w_hat^2 - third-formula|
    l2_bound_margin: float        # min of half-formula - third-formula (>= 0)
    l1_residual: float            # |global L1 identity| (same-sign endpoints)
    mixed_sign_edges: int         # edges where the L1 identity is only <=
    l1_margin: float              # min of rhs - lhs for the L1 comparison


def interpolation_bounds_check(X: MetricGraph, w: VertexFunction) -> InterpolationReport:
    """Exact interpolation identities for w_hat = interpolate(w).

    Per edge (x, y) with weight omega and length d:

    * energy:  omega d int (w_hat')^2 = omega (w(x) - w(y))^2
    * L2:      omega d int w_hat^2 = omega d^2 (wx^2 + wx wy + wy^2)/3
               <= omega d^2 (wx^2 + wy^2)/2
    * L1:      omega d int |w_hat| = omega d^2 (|wx| + |wy|)/2 when the
               endpoint values share a sign; for mixed signs the exact
               integral is strictly smaller and only the inequality is
               asserted.

    Summing the L1 identity over edges gives
    ||w_hat||_L1(mu_hat) = (1/2) sum_x |w(x)| mu_special(x).
    """
    wh = interpolate(X, w)
    ws = _vertex_array(X, w, X.src)
    wd = _vertex_array(X, w, X.dst)
    l, om = X.l, X.omega

    lhs_energy = om * l * _int_poly([wh.b * wh.b], l)
    rhs_energy = om * (ws - wd) ** 2
    energy_residual = float(np.max(np.abs(lhs_energy - rhs_energy), initial=0.0))

    lhs_l2 = om * l * _int_poly([wh.c * wh.c, 2.0 * wh.b * wh.c, wh.b * wh.b], l)
    third = om * l * l * (ws * ws + ws * wd + wd * wd) / 3.0
    half = om * l * l * (ws * ws + wd * wd) / 2.0
    l2_residual = float(np.max(np.abs(lhs_l2 - third), initial=0.0))
    l2_bound_margin = float(np.min(half - third, initial=math.inf))

    same_sign = ws * wd >= 0.0
    lhs_l1 = np.empty(X.n_edges)
    for e in range(X.n_edges):
        le = float(l[e])
        if same_sign[e]:
            seg = abs(_integral_on(wh, e, 0.0, le))
        else:
            t0 = -float(wh.c[e]) / float(wh.b[e])    # sign change of the line
            seg = abs(_integral_on(wh, e, 0.0, t0)) + abs(_integral_on(wh, e, t0, le))
        lhs_l1[e] = om[e] * le * seg
    rhs_l1 = om * l * l * (np.abs(ws) + np.abs(wd)) / 2.0
    l1_res = float(np.max(np.abs(lhs_l1 - rhs_l1)[same_sign], initial=0.0))
    l1_margin = float(np.min(rhs_l1 - lhs_l1, initial=math.inf))
    return InterpolationReport(
        energy_residual=energy_residual,
        l2_residual=l2_residual,
        l2_bound_margin=l2_bound_margin,
        l1_residual=l1_res,
        mixed_sign_edges=int((~same_sign).sum()),
        l1_margin=l1_margin,
    )


def trace_constant(c0: float) -> float:
    """2 sup_{t in (0, c0]} t coth(t) = 2 c0 coth(c0) (t coth t increases)."""
    if c0 <= 0:
        raise ValueError(f"c0 must be positive, got {c0}")
    return 2.0 * c0 / math.tanh(c0)


def _sup_abs_quadratic(a: float, b: float, c: float, l: float) -> float:
    cands = [abs(c), abs((a * l + b) * l + c)]
    if a != 0.0:
        t_crit = -b / (2.0 * a)
        if 0.0 < t_crit < l:
            cands.append(abs((a * t_crit + b) * t_crit + c))
    return max(cands)


@dataclass(frozen=True)
class SobolevReport:
    n_samples: int
    interval_violations: int      # coth(l) embedding failures
    weighted_violations: int      # weighted trace (per-edge) failures
    trace_violations: int         # vertex-trace constant failures
    worst_interval_margin: float
    worst_trace_margin: float


def sobolev_check(X: MetricGraph, n_samples: int = 1000,
                  seed: int = 0) -> SobolevReport:
    """Sweep random piecewise quadratics against the Sobolev inequalities.

    Checked per sampled edge function u (a in {0, 1/2}):

    * (sup |u|)^2 <= coth(l) int (u^2 + u'^2) dt
    * sup^2 <= (coth(d)/(omega d)) ||u||^2_W12 with the omega d-weighted
      norm (the same inequality scaled, asserted independently)

    and per whole-graph sample, the vertex trace bound

        sum_x u(x)^2 mu_special(x) <= C ||u||^2_W12(X),
        C = 2 sup_{t in (0, c0]} t coth(t),

    which needs every edge length <= c0 (adapted metric).
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    n_edges = X.n_edges
    if n_edges == 0:
        return SobolevReport(0, 0, 0, 0, math.inf, math.inf)
    C = trace_constant(X.c0)
    iv = wv = tv = 0
    worst_i = math.inf
    worst_t = math.inf
    for _ in range(n_samples):
        # continuous sample: random vertex values, random bends
        values = {x: float(v) for x, v in
                  zip(X.vertices, rng.uniform(-2.0, 2.0, len(X.vertices)))}
        u = woymp_extend(X, VertexFunction(values),
                         float(rng.uniform(-2.0, 2.0)))
        int_usq = _int_poly([u.c * u.c, 2.0 * u.b * u.c,
                             u.b * u.b + 2.0 * u.a * u.c,
                             2.0 * u.a * u.b, u.a * u.a], X.l)
        int_dusq = _int_poly([u.b * u.b, 4.0 * u.a * u.b, 4.0 * u.a * u.a], X.l)
        w12 = int_usq + int_dusq
        for e in range(n_edges):
            le = float(X.l[e])
            sup2 = _sup_abs_quadratic(float(u.a[e]), float(u.b[e]),
                                      float(u.c[e]), le) ** 2
            bound = float(w12[e]) / math.tanh(le)
            margin = bound - sup2
            worst_i = min(worst_i, margin)
            if margin < -1e-12 * (1.0 + bound):
                iv += 1
            wbound = (float(X.p[e]) * float(w12[e])) / \
                (math.tanh(le) * float(X.omega[e]) * le)
            if wbound - sup2 < -1e-12 * (1.0 + wbound):
                wv += 1
        trace = sum(u.vertex_values[x] ** 2 * X.mu_special(x) for x in X.vertices)
        w12_total = float((X.p * w12).sum())
        margin = C * w12_total - trace
        worst_t = min(worst_t, margin)
        if margin < -1e-12 * (1.0 + C * w12_total):
            tv += 1
    return SobolevReport(n_samples, iv, wv, tv, float(worst_i), float(worst_t))


def dump_metric_graph(X: MetricGraph, path) -> None:
    """Write `medge <id1> <id2> <l> <p> <q>` records, one per oriented edge."""
    with open(path, "w") as fh:
        for e in range(X.n_edges):
            fh.write(f"medge {int(X.src[e])} {int(X.dst[e])} "
                     f"{float(X.l[e])!r} {float(X.p[e])!r} {float(X.q[e])!r}\n")


def load_metric_graph(path) -> MetricGraph:
    """Read a `medge` dump back.  The vertex measure of the underlying
    graph is not part of the format, so comparison-lemma operations on
    a loaded instance are unavailable (mu is empty); the polynomial
    calculus is fully usable."""
    src, dst, ll, pp, qq = [], [], [], [], []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if parts[0] != "medge" or len(parts) != 6:
                raise GraphFormatError(f"line {lineno}: expected medge records")
            try:
                src.append(int(parts[1]))
                dst.append(int(parts[2]))
                ll.append(float(parts[3]))
                pp.append(float(parts[4]))
                qq.append(float(parts[5]))
            except ValueError as exc:
                raise GraphFormatError(f"line {lineno}: {exc}") from None
    verts = sorted(set(src) | set(dst))
    star: Dict[int, List[Tuple[int, int]]] = {x: [] for x in verts}
    for e in range(len(src)):
        star[src[e]].append((e, 0))
        star[dst[e]].append((e, 1))
    l_arr = np.array(ll)
    p_arr = np.array(pp)
    with np.errstate(divide="ignore", invalid="ignore"):
        om = np.where(l_arr > 0, p_arr / l_arr, 0.0)
    return MetricGraph(
        vertices=tuple(verts),
        src=np.array(src, np.int64),
        dst=np.array(dst, np.int64),
        l=l_arr,
        p=p_arr,
        q=np.array(qq),
        omega=om,
        star={x: tuple(v) for x, v in star.items()},
        mu={},
        c0=float(l_arr.max(initial=1.0)),
    )


def dump_poly(f: PiecewisePoly, path) -> None:
    """Write `poly <eid> <a> <b> <c>` records, one per edge."""
    with open(path, "w") as fh:
        for e in range(f.X.n_edges):
            fh.write(f"poly {e} {float(f.a[e])!r} {float(f.b[e])!r} "
                     f"{float(f.c[e])!r}\n")


def load_poly(X: MetricGraph, path) -> PiecewisePoly:
    """Read a `poly` dump against a known metric graph; vertex values
    are recovered from edge endpoints and cross-checked for continuity."""
    a = np.zeros(X.n_edges)
    b = np.zeros(X.n_edges)
    c = np.zeros(X.n_edges)
    seen = set()
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if parts[0] != "poly" or len(parts) != 5:
                raise GraphFormatError(f"line {lineno}: expected poly records")
            try:
                e = int(parts[1])
                a[e], b[e], c[e] = float(parts[2]), float(parts[3]), float(parts[4])
            except (ValueError, IndexError) as exc:
                raise GraphFormatError(f"line {lineno}: {exc}") from None
            seen.add(e)
    if len(seen) != X.n_edges:
        raise GraphFormatError(f"poly file covers {len(seen)} of {X.n_edges} edges")
    values: Dict[int, float] = {}
    poly = PiecewisePoly(X, a, b, c, values)
    for e in range(X.n_edges):
        for x, t in ((int(X.src[e]), 0.0), (int(X.dst[e]), float(X.l[e]))):
            v = poly.value(e, t)
            if x in values and abs(values[x] - v) > 1e-9 * (1.0 + abs(v)):
                raise GraphFormatError(f"poly file discontinuous at vertex {x}")
            values[x] = v
    for x in X.vertices:
        values.setdefault(x, 0.0)
    return poly
