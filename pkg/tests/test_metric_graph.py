"""Metric graph over a weighted graph: exact interval calculus.

Hand values use the 3-path 0-1-2 with omega = (2, 3), mu = 1, and edge
lengths d = (0.5, 0.25) under c0 = 1, which is adapted:
sum omega d^2 at vertex 1 is 2*0.25 + 3*0.0625 = 0.6875 <= 1.
"""

import math

import numpy as np
import pytest

from sclab.graph import VertexFunction, WeightedGraph, ball_window, full_window
from sclab.metrics import EdgeLengths, PathMetric, degree_metric
from sclab.metric_graph import (
    EdgePoint,
    ball_measure,
    boundary_derivatives,
    build,
    compare_lemma,
    dump_metric_graph,
    dump_poly,
    energy_form,
    hat_function,
    ibp_check,
    interpolate,
    interpolation_bounds_check,
    load_metric_graph,
    load_poly,
    quotient_distance,
    restrict,
    sobolev_check,
    trace_constant,
    woymp_extend,
    woymp_inequality_check,
)


def hand_instance():
    g = WeightedGraph.from_edges([(0, 1, 2.0), (1, 2, 3.0)], 1.0)
    d = EdgeLengths.from_table({(0, 1): 0.5, (1, 2): 0.25}, c0=1.0)
    pm = PathMetric(g, d)
    window = full_window(g)
    return g, pm, window, build(g, pm, window)


def test_build_hand_values():
    g, pm, window, X = hand_instance()
    assert X.n_edges == 2
    assert X.warnings == ()
    assert np.allclose(X.l, [0.5, 0.25])
    # p = q = omega * d
    assert np.allclose(X.p, [1.0, 0.75])
    assert np.allclose(X.q, X.p)
    # interval measure q * l = omega d^2
    assert np.allclose(X.edge_measure(), [0.5, 0.1875])
    assert X.total_measure() == pytest.approx(0.6875)
    assert X.mu_special(1) == pytest.approx(0.6875)
    assert X.mu_special(0) == pytest.approx(0.5)
    assert X.edge_between(1, 2) == 1
    assert X.edge_between(0, 2) is None


def test_build_flags_non_adapted_metric():
    g = WeightedGraph.from_edges([(0, 1, 10.0)], 1.0)
    pm = PathMetric(g, EdgeLengths(lambda x, y: 1.0, 1.0))
    X = build(g, pm, full_window(g))
    assert len(X.warnings) == 1
    assert "neither" in X.warnings[0]


def test_build_rejects_degenerate_lengths():
    g = WeightedGraph.from_edges([(0, 1, 1.0)], 1.0)
    pm = PathMetric(g, EdgeLengths(lambda x, y: 0.0, 1.0))
    with pytest.raises(ValueError, match="positive finite length"):
        build(g, pm, full_window(g))
    with pytest.raises(ValueError, match="orientation"):
        build(g, PathMetric(g, EdgeLengths(lambda x, y: 1.0, 1.0)),
              full_window(g), orientation="sideways")


def test_interpolate_and_restrict():
    _, _, _, X = hand_instance()
    w = VertexFunction({0: 1.0, 1: 3.0, 2: 0.0})
    wh = interpolate(X, w)
    assert wh.validate() == []
    assert wh.value(0, 0.25) == pytest.approx(2.0)
    assert wh.value_at(EdgePoint(1, 0.25)) == pytest.approx(0.0)
    assert wh.at_vertex(1) == 3.0
    back = restrict(wh)
    assert all(back(x) == w(x) for x in (0, 1, 2))


def test_energy_form_matches_discrete_energy():
    _, _, _, X = hand_instance()
    w = VertexFunction({0: 1.0, 1: 3.0, 2: 0.0})
    wh = interpolate(X, w)
    # per edge omega * (du)^2: 2*4 + 3*9 = 35
    assert energy_form(X, wh, wh) == pytest.approx(35.0, abs=1e-12)


def test_hat_energy_is_mu_times_laplacian():
    # eps_hat(v, phi_x) = mu(x) Delta u(x) for any extension v of u
    g, pm, window, X = hand_instance()
    u = VertexFunction({0: 1.0, 1: 3.0, 2: 0.0})
    phi = hat_function(X, 1)
    expected = 2.0 * (3.0 - 1.0) + 3.0 * (3.0 - 0.0)   # mu=1
    assert energy_form(X, interpolate(X, u), phi) == pytest.approx(expected)
    bent = woymp_extend(X, u, 2.5)
    assert energy_form(X, bent, phi) == pytest.approx(expected, abs=1e-12)


def test_hat_function_shape():
    _, _, _, X = hand_instance()
    phi = hat_function(X, 1)
    assert phi.at_vertex(1) == 1.0
    assert phi.at_vertex(0) == 0.0
    assert phi.value(0, 0.0) == pytest.approx(0.0)
    assert phi.value(0, 0.5) == pytest.approx(1.0)
    # eps_hat(phi, phi) = sum of incident omega
    assert energy_form(X, phi, phi) == pytest.approx(5.0)
    with pytest.raises(KeyError):
        hat_function(X, 99)


def test_ibp_check_exact():
    _, _, _, X = hand_instance()
    u = VertexFunction({0: 1.0, 1: 3.0, 2: 0.0})
    phi = hat_function(X, 1)
    assert ibp_check(X, interpolate(X, u), phi) <= 1e-12
    assert ibp_check(X, woymp_extend(X, u, 0.5), phi) <= 1e-12
    with pytest.raises(ValueError, match="linear"):
        ibp_check(X, phi, woymp_extend(X, u, 0.5))


def test_woymp_extend_bends_only_superlevel_edges():
    _, _, _, X = hand_instance()
    u = VertexFunction({0: 0.0, 1: 3.0, 2: 0.0})
    v = woymp_extend(X, u, 2.5)   # Omega = {1}; both edges touch it
    assert v.validate() == []
    assert np.allclose(v.a, [0.5, 0.5])
    w = woymp_extend(X, u, 5.0)   # Omega empty: plain interpolation
    assert np.allclose(w.a, [0.0, 0.0])
    # quadratic piece keeps endpoint values
    assert v.value(0, 0.0) == pytest.approx(0.0)
    assert v.value(0, 0.5) == pytest.approx(3.0)


def test_boundary_derivatives_closed_form():
    _, _, _, X = hand_instance()
    u = VertexFunction({0: 1.0, 1: 3.0, 2: 0.0})
    lin = interpolate(X, u)
    d0, dl = boundary_derivatives(lin, 0)
    assert d0 == pytest.approx(4.0)   # (3-1)/0.5
    assert dl == pytest.approx(4.0)
    quad = woymp_extend(X, u, 0.5)
    q0, ql = boundary_derivatives(quad, 0)
    assert q0 == pytest.approx(4.0 - 0.25)   # slope - l/2
    assert ql == pytest.approx(4.0 + 0.25)
    assert ql - q0 == pytest.approx(float(X.l[0]))


def test_quotient_distance_hand_values():
    _, _, _, X = hand_instance()
    assert quotient_distance(X, 0, EdgePoint(0, 0.2)) == pytest.approx(0.2)
    assert quotient_distance(X, 0, EdgePoint(1, 0.1)) == pytest.approx(0.6)
    # entering edge 0 from the far side wins close to vertex 1
    assert quotient_distance(X, 2, EdgePoint(0, 0.4)) == pytest.approx(0.35)
    with pytest.raises(ValueError):
        quotient_distance(X, 0, EdgePoint(0, 0.9))


def test_ball_measure_hand_values():
    _, _, _, X = hand_instance()
    assert ball_measure(X, 0, 0.3) == pytest.approx(0.3)
    assert ball_measure(X, 0, 0.6) == pytest.approx(0.575)
    assert ball_measure(X, 0, 10.0) == pytest.approx(X.total_measure())
    assert ball_measure(X, 0, 0.0) == 0.0
    with pytest.raises(ValueError):
        ball_measure(X, 0, -0.1)


def test_ball_measure_monotone_in_radius():
    _, _, _, X = hand_instance()
    rs = np.linspace(0.0, 1.0, 21)
    vals = [ball_measure(X, 1, float(r)) for r in rs]
    assert all(b >= a - 1e-15 for a, b in zip(vals, vals[1:]))


def test_compare_lemma_on_adapted_instance():
    g, pm, window, X = hand_instance()
    rep = compare_lemma(g, pm, X, 0, (0.2, 0.5, 0.8))
    assert rep.ok
    assert rep.metric_margin >= -1e-12
    assert rep.volume_margin >= -1e-12


def test_interpolation_identities_hand_function():
    _, _, _, X = hand_instance()
    rep = interpolation_bounds_check(X, VertexFunction({0: 1.0, 1: 3.0, 2: 0.0}))
    assert rep.energy_residual <= 1e-12
    assert rep.l2_residual <= 1e-12
    assert rep.l2_bound_margin >= -1e-15
    assert rep.mixed_sign_edges == 0
    assert rep.l1_residual <= 1e-12
    assert rep.l1_margin >= -1e-12


def test_interpolation_mixed_sign_is_strict():
    _, _, _, X = hand_instance()
    rep = interpolation_bounds_check(X, VertexFunction({0: 1.0, 1: 3.0, 2: -1.0}))
    assert rep.mixed_sign_edges == 1
    assert rep.l1_margin >= -1e-15    # exact on the same-sign edge
    # isolate the crossing edge: there the comparison is strictly below
    g1 = WeightedGraph.from_edges([(0, 1, 3.0)], 1.0)
    pm1 = PathMetric(g1, EdgeLengths.from_table({(0, 1): 0.25}, c0=1.0))
    X1 = build(g1, pm1, full_window(g1))
    rep1 = interpolation_bounds_check(X1, VertexFunction({0: 3.0, 1: -1.0}))
    assert rep1.mixed_sign_edges == 1
    # omega d int |w_hat| = 3 * 0.25 * 0.3125 against rhs 0.375
    assert rep1.l1_margin == pytest.approx(0.375 - 0.234375, abs=1e-12)


def test_woymp_inequality_check_ok_on_violating_window():
    s = 0.6
    m = 4
    edges = [(k, k + 1, 1.0 + 2.0 * k / s) for k in range(m + 1)]
    g = WeightedGraph.from_edges(edges, 1.0)
    window = ball_window(g, None, 0, float(m))
    u = VertexFunction({x: -(m - x) * s for x in window.vertices}, window)
    pm = PathMetric(g, degree_metric(g, c0=1.0))
    X = build(g, pm, window)
    rep = woymp_inequality_check(g, pm, X, u, 1.0, window)
    assert rep.status == "ok"
    assert rep.worst_margin >= 0.0
    assert set(rep.margins) == {3}


def test_woymp_inequality_check_inapplicable():
    g, pm, window, X = hand_instance()
    u = VertexFunction({0: 1.0, 1: 3.0, 2: 0.0}, window)
    rep = woymp_inequality_check(g, pm, X, u, 1.0, window)
    assert rep.status == "inapplicable"
    assert math.isnan(rep.worst_margin)
    with pytest.raises(ValueError):
        woymp_inequality_check(g, pm, X, u, 0.0, window)


def test_sobolev_no_violations_on_hand_instance():
    _, _, _, X = hand_instance()
    rep = sobolev_check(X, n_samples=50, seed=3)
    assert rep.n_samples == 50
    assert rep.interval_violations == 0
    assert rep.weighted_violations == 0
    assert rep.trace_violations == 0


def test_trace_constant():
    assert trace_constant(1.0) == pytest.approx(2.0 / math.tanh(1.0))
    # t coth t -> 1 as t -> 0, so small c0 gives constants near 2
    assert trace_constant(1e-8) == pytest.approx(2.0, abs=1e-6)
    with pytest.raises(ValueError):
        trace_constant(0.0)


def test_orientation_independence():
    g, pm, window, _ = hand_instance()
    A = build(g, pm, window, orientation="canonical")
    B = build(g, pm, window, orientation="flipped")
    w = VertexFunction({0: 1.0, 1: 3.0, 2: -2.0})
    ea = energy_form(A, interpolate(A, w), interpolate(A, w))
    eb = energy_form(B, interpolate(B, w), interpolate(B, w))
    assert ea == pytest.approx(eb, abs=1e-12)
    assert ball_measure(A, 0, 0.6) == pytest.approx(ball_measure(B, 0, 0.6))


def test_metric_graph_dump_load_roundtrip(tmp_path):
    _, _, _, X = hand_instance()
    p = tmp_path / "x.medge"
    dump_metric_graph(X, p)
    Y = load_metric_graph(p)
    assert Y.n_edges == X.n_edges
    assert np.allclose(Y.l, X.l)
    assert np.allclose(Y.p, X.p)
    assert np.allclose(Y.q, X.q)
    assert Y.total_measure() == pytest.approx(X.total_measure())
    # vertex measures are not part of the edge file
    assert Y.mu == {}


def test_poly_dump_load_roundtrip(tmp_path):
    _, _, _, X = hand_instance()
    u = VertexFunction({0: 1.0, 1: 3.0, 2: 0.0})
    f = woymp_extend(X, u, 0.5)
    p = tmp_path / "f.poly"
    dump_poly(f, p)
    g2 = load_poly(X, p)
    assert np.allclose(g2.a, f.a)
    assert np.allclose(g2.b, f.b)
    assert np.allclose(g2.c, f.c)
    assert g2.vertex_values == pytest.approx(f.vertex_values)


def test_poly_validate_detects_breakage():
    _, _, _, X = hand_instance()
    f = interpolate(X, VertexFunction({0: 1.0, 1: 3.0, 2: 0.0}))
    f.c[0] += 0.5   # break continuity at the source of edge 0
    assert any("discontinuous" in p for p in f.validate())
    f2 = interpolate(X, VertexFunction({0: 1.0, 1: 3.0, 2: 0.0}))
    f2.a[1] = 0.3
    assert any("leading coefficient" in p for p in f2.validate())
