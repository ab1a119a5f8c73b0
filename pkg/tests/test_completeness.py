"""Completeness deciders: resolvent deficiency, WOYMP certificates,
FOT probe, and the birth-death summability oracle.

The worked 2x2 case: unit path, window {0,1} with vertex 2 Dirichlet,
lambda=1 gives the system 2u0 - u1 = 1, -u0 + 3u1 = 1, so u = (0.8, 0.6).
Larger frozen deficiencies were produced by this package's own solver
once the 2x2 and harmonicity invariants held, then pinned.
"""

import pytest

from sclab.completeness import (
    STABILIZATION_TOL,
    WoympCertificate,
    dirichlet_resolvent,
    fot_probe,
    incompleteness_defect,
    nearest_neighbor_oracle,
    woymp_check,
)
from sclab.families import birth_death
from sclab.graph import (
    VertexFunction,
    WeightedGraph,
    ball_window,
    formal_laplacian,
    full_window,
)
from sclab.metrics import PathMetric, degree_metric


def unit_path():
    return WeightedGraph(lambda x: ([(x - 1, 1.0)] if x > 0 else [])
                         + [(x + 1, 1.0)], 1.0)


def test_resolvent_2x2_hand_solution():
    w = ball_window(unit_path(), None, 0, 2.0)
    u = dirichlet_resolvent(w, 1.0)
    assert u(0) == pytest.approx(0.8, abs=1e-10)
    assert u(1) == pytest.approx(0.6, abs=1e-10)
    assert u(2) == 0.0


def test_resolvent_domain_monotonicity():
    g = unit_path()
    u2 = dirichlet_resolvent(ball_window(g, None, 0, 2.0), 1.0)
    u3 = dirichlet_resolvent(ball_window(g, None, 0, 3.0), 1.0)
    assert u3(0) >= u2(0) - 1e-12
    assert u3(0) == pytest.approx(12.0 / 13.0, abs=1e-10)


def test_resolvent_without_boundary_is_one():
    g = WeightedGraph.from_edges([(0, 1, 2.0), (1, 2, 3.0)],
                                 {0: 1.0, 1: 2.0, 2: 4.0})
    u = dirichlet_resolvent(full_window(g), 1.0)
    for x in (0, 1, 2):
        assert u(x) == pytest.approx(1.0, abs=1e-10)


def test_resolvent_rejects_bad_lambda():
    w = ball_window(unit_path(), None, 0, 2.0)
    with pytest.raises(ValueError):
        dirichlet_resolvent(w, 0.0)


def test_deficiency_is_lambda_harmonic():
    g = birth_death(2.0)
    window = ball_window(g, None, 0, 30.0)
    lam = 0.25
    u = dirichlet_resolvent(window, lam)
    w = VertexFunction({x: 1.0 - u(x) for x in window.vertices}, window)
    worst = max(abs(formal_laplacian(g, w, x) + lam * w(x))
                for x in window.interior)
    assert worst < 1e-9


def test_incompleteness_defect_frozen_birth_death_3():
    prof = incompleteness_defect(birth_death(3.0), None, 0, 1.0,
                                 radii=(100, 200, 400))
    assert prof.verdict == "incomplete"
    assert prof.deficiency[0] == pytest.approx(0.3102801382, abs=1e-8)
    assert prof.deficiency[1] == pytest.approx(0.3087872014, abs=1e-8)
    assert prof.deficiency[2] == pytest.approx(0.3080317771, abs=1e-8)
    assert abs(prof.deficiency[-1] - prof.deficiency[-2]) < STABILIZATION_TOL
    assert all(r <= 1e-10 for r in prof.residuals)


def test_incompleteness_defect_complete_side():
    prof = incompleteness_defect(birth_death(1.0), None, 0, 1.0,
                                 radii=(100, 200))
    assert prof.verdict == "complete_up_to_evidence"
    assert abs(prof.deficiency[-1]) < 1e-6


def test_incompleteness_defect_rejects_bad_radii():
    g = birth_death(1.0)
    with pytest.raises(ValueError):
        incompleteness_defect(g, None, 0, 1.0, radii=(4, 4))
    with pytest.raises(ValueError):
        incompleteness_defect(g, None, 0, 1.0, radii=())


def _woymp_instance(omegas, s=0.6, m=4):
    # path 0..m+1; u rises linearly toward the boundary vertex m where
    # the window supremum sits, the classic finite-window violation shape
    edges = [(k, k + 1, omegas[k]) for k in range(m + 1)]
    g = WeightedGraph.from_edges(edges, 1.0)
    window = ball_window(g, None, 0, float(m))
    u = VertexFunction({x: -(m - x) * s for x in window.vertices}, window)
    return g, window, u


def test_woymp_violating_hand_window():
    s = 0.6
    omegas = [1.0 + 2.0 * k / s for k in range(5)]
    g, window, u = _woymp_instance(omegas, s=s)
    cert = WoympCertificate.from_window(u, 1.0, window)
    res = woymp_check(g, cert, window)
    assert res.status == "violating"
    assert res.witnesses == (3,)
    assert res.worst_laplacian == pytest.approx(-2.0)


def test_woymp_not_violating_with_decreasing_weights():
    omegas = [2.0 - 0.1 * k for k in range(5)]
    g, window, u = _woymp_instance(omegas)
    cert = WoympCertificate.from_window(u, 1.0, window)
    res = woymp_check(g, cert, window)
    assert res.status == "not_violating"
    assert res.worst_laplacian > -1.0


def test_woymp_vacuous_when_superlevel_misses_interior():
    s = 0.6
    omegas = [1.0 + 2.0 * k / s for k in range(5)]
    g, window, u = _woymp_instance(omegas, s=s)
    # Omega_alpha = {u > -0.3} = {4}, which is the boundary vertex
    cert = WoympCertificate.from_window(u, 0.3, window)
    assert woymp_check(g, cert, window).status == "vacuous_on_window"


def test_woymp_rejects_false_supremum():
    s = 0.6
    omegas = [1.0 + 2.0 * k / s for k in range(5)]
    g, window, u = _woymp_instance(omegas, s=s)
    cert = WoympCertificate(u, 1.0, u_star=-0.5)
    with pytest.raises(ValueError, match="supremum"):
        woymp_check(g, cert, window)


def test_woymp_certificate_rejects_bad_alpha():
    with pytest.raises(ValueError):
        WoympCertificate(VertexFunction({0: 0.0}), 0.0, 0.0)


def test_woymp_violation_survives_measure_reduction():
    s = 0.6
    omegas = [1.0 + 2.0 * k / s for k in range(5)]
    g, window, u = _woymp_instance(omegas, s=s)
    cert = WoympCertificate.from_window(u, 1.0, window)
    assert woymp_check(g, cert, window).status == "violating"
    nu = {x: 0.5 * window.mu[x] for x in window.vertices}
    g2 = WeightedGraph.from_edges(list(window.edges), nu)
    assert woymp_check(g2, cert, window).status == "violating"


def test_fot_probe_decays_on_complete_chain():
    g = birth_death(1.0)
    pm = PathMetric(g, degree_metric(g, c0=1.0))
    tw = VertexFunction({i: 1.0 for i in range(11)})
    probe = fot_probe(g, 0, (2, 3, 4, 6, 8), tw, pm)
    assert probe.trend == "to_zero"
    assert probe.energies[0] == pytest.approx(1.146829277314, abs=1e-9)
    assert probe.energies[1] == pytest.approx(0.764552851543, abs=1e-9)
    assert probe.energies[-1] == 0.0


def test_fot_probe_rejects_bad_radius():
    g = birth_death(1.0)
    tw = VertexFunction({0: 1.0})
    with pytest.raises(ValueError):
        fot_probe(g, 0, (0.0,), tw, None)


def test_oracle_dichotomy():
    complete = nearest_neighbor_oracle(lambda n: 1.0,
                                       lambda n: float(n + 1))
    assert complete.verdict == "complete"
    incomplete = nearest_neighbor_oracle(lambda n: 1.0,
                                         lambda n: float((n + 1) ** 3))
    assert incomplete.verdict == "incomplete"
    assert incomplete.slope == pytest.approx(-2.0, abs=0.05)
    boundary = nearest_neighbor_oracle(lambda n: 1.0,
                                       lambda n: float((n + 1) ** 2))
    assert boundary.verdict == "complete"
    assert boundary.slope == pytest.approx(-1.0, abs=0.05)


def test_oracle_accepts_sequences():
    n = 2000
    mu = [1.0] * n
    om = [float((k + 1) ** 3) for k in range(n)]
    res = nearest_neighbor_oracle(mu, om, n_terms=n)
    assert res.verdict == "incomplete"


def test_oracle_indeterminate_on_noisy_terms():
    res = nearest_neighbor_oracle(
        lambda n: 1.0,
        lambda n: float((n + 1) ** 2) * (10.0 if n % 2 else 1.0),
        n_terms=2000)
    assert res.verdict == "indeterminate"
    assert res.r_squared < 0.98


def test_oracle_rejects_nonpositive_sequences():
    with pytest.raises(ValueError):
        nearest_neighbor_oracle(lambda n: 0.0, lambda n: 1.0, n_terms=10)
